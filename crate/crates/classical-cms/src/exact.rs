//! Exact-arithmetic side of the Lax structure: symbolic trace powers
//! and the Leibniz determinant of `lambda + L`, used as independent
//! oracles for the operator-algebra checks.

use exactfun::{GaussianRational, RationalFunction, Result, Var, VarSet};

pub type ExactMatrix = Vec<Vec<GaussianRational>>;

/// `det(lambda + L)` at an exact point by the Leibniz expansion
/// (fully independent of any elimination or trace route).
pub fn lax_det_exact(
    p: &[GaussianRational],
    z: &[GaussianRational],
    lam: &GaussianRational,
) -> Result<GaussianRational> {
    let n = p.len();
    assert_eq!(z.len(), n);
    let mut a: ExactMatrix = vec![vec![GaussianRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                a[i][j] = &p[i] + lam;
            } else {
                let d = &z[i] - &z[j];
                a[i][j] = &z[i] * &d.inv()?;
            }
        }
    }
    let mut det = GaussianRational::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    // Iterative Heap's algorithm with sign tracking.
    let mut c = vec![0usize; n];
    let mut sign = 1i64;
    det = &det + &leibniz_term(&a, &perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            det = &det + &leibniz_term(&a, &perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(det)
}

fn leibniz_term(a: &ExactMatrix, perm: &[usize], sign: i64) -> GaussianRational {
    let mut t = GaussianRational::from_int(sign);
    for (r, &c) in perm.iter().enumerate() {
        t = &t * &a[r][c];
    }
    t
}

/// Symbolic `tr L^k` on the shared variable set `z, p, hbar, lambda`.
pub fn tr_lax_power_exact(n: usize, k: u32) -> Result<RationalFunction> {
    let vars = VarSet::full(n as u32);
    let zero = RationalFunction::zero(vars.clone());
    let mut l: Vec<Vec<RationalFunction>> = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                l[i][j] = RationalFunction::var(vars.clone(), Var::P(i as u32 + 1))?;
            } else {
                let zi = RationalFunction::var(vars.clone(), Var::Z(i as u32 + 1))?;
                let zj = RationalFunction::var(vars.clone(), Var::Z(j as u32 + 1))?;
                l[i][j] = zi.div(&zi.sub(&zj))?;
            }
        }
    }
    let mut pw = l.clone();
    for _ in 1..k {
        pw = mat_mul(&pw, &l, &zero);
    }
    let mut tr = zero;
    for (i, row) in pw.iter().enumerate() {
        tr = tr.add(&row[i]);
    }
    Ok(tr)
}

fn mat_mul(
    a: &[Vec<RationalFunction>],
    b: &[Vec<RationalFunction>],
    zero: &RationalFunction,
) -> Vec<Vec<RationalFunction>> {
    let n = a.len();
    let mut out = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = zero.clone();
            for (m, am) in a[i].iter().enumerate() {
                acc = acc.add(&am.mul(&b[m][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Elementary symmetric values from power sums by the Newton recursion
/// `k e_k = sum_{m=1}^{k} (-1)^{m-1} e_{k-m} t_m`.
pub fn newton_from_power_sums(t: &[GaussianRational]) -> Vec<GaussianRational> {
    let n = t.len();
    let mut e = vec![GaussianRational::one()];
    for k in 1..=n {
        let mut acc = GaussianRational::zero();
        let mut sign = 1i64;
        for m in 1..=k {
            let term = &e[k - m] * &t[m - 1];
            acc = &acc + &term.pow(1).scale_sign(sign);
            sign = -sign;
        }
        let inv_k = GaussianRational::from_ratio(1, k as i64);
        e.push(&acc * &inv_k);
    }
    e
}

trait ScaleSign {
    fn scale_sign(self, sign: i64) -> Self;
}

impl ScaleSign for GaussianRational {
    fn scale_sign(self, sign: i64) -> Self {
        if sign >= 0 {
            self
        } else {
            -&self
        }
    }
}
