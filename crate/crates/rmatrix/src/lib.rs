//! R-matrix identity suite: Yang-Baxter residuals on triple tensor
//! products, semiclassical extraction of the classical r- and s-matrices
//! and the unitarity proposition tying them to a scalar.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RMatrixError {
    #[error("evaluation at a pole argument u = 0")]
    PoleArgument,
    #[error("Richardson extrapolation did not converge: last change {0:.3e}")]
    NoConvergence(f64),
}

pub type Result<T> = std::result::Result<T, RMatrixError>;

type Eval = Box<dyn Fn(f64, f64) -> DMatrix<Complex64> + Send + Sync>;
type RFun = Box<dyn Fn(f64) -> DMatrix<Complex64> + Send + Sync>;

/// A family `(u, hbar) -> R(u, hbar)` on `C^N (x) C^N`, optionally
/// carrying declared expansion terms.
pub struct RMatrixFamily {
    pub local_dim: usize,
    eval: Eval,
    pub declared_r: Option<RFun>,
    pub declared_s: Option<RFun>,
}

impl RMatrixFamily {
    pub fn new(local_dim: usize, eval: Eval) -> Self {
        RMatrixFamily {
            local_dim,
            eval,
            declared_r: None,
            declared_s: None,
        }
    }

    pub fn eval(&self, u: f64, hbar: f64) -> Result<DMatrix<Complex64>> {
        if u == 0.0 {
            return Err(RMatrixError::PoleArgument);
        }
        Ok((self.eval)(u, hbar))
    }
}

/// The flip operator `P (a (x) b) = b (x) a` on `C^N (x) C^N`.
pub fn flip(local_dim: usize) -> DMatrix<Complex64> {
    let n2 = local_dim * local_dim;
    let mut p = DMatrix::zeros(n2, n2);
    for a in 0..local_dim {
        for b in 0..local_dim {
            // column index (a, b) -> row index (b, a); first factor fastest
            p[(b + local_dim * a, a + local_dim * b)] = Complex64::new(1.0, 0.0);
        }
    }
    p
}

/// Rational `R(u, hbar) = I + (hbar/u) P` with its declared expansion
/// `R = 1 + i hbar r + O(hbar^2)`, `r(u) = -i P / u`, `s = 0`.
pub fn yang_r(local_dim: usize) -> RMatrixFamily {
    assert!(local_dim >= 2);
    let n2 = local_dim * local_dim;
    let p = flip(local_dim);
    let p2 = p.clone();
    let mut fam = RMatrixFamily::new(
        local_dim,
        Box::new(move |u, hbar| {
            DMatrix::identity(n2, n2) + &p * Complex64::new(hbar / u, 0.0)
        }),
    );
    fam.declared_r = Some(Box::new(move |u| {
        &p2 * (Complex64::new(0.0, -1.0) / Complex64::new(u, 0.0))
    }));
    let zero = DMatrix::zeros(n2, n2);
    fam.declared_s = Some(Box::new(move |_| zero.clone()));
    fam
}

/// Embed an operator on the factor pair `(a, b)` (1-based, a < b) of
/// the triple product `C^N (x) C^N (x) C^N`; the first factor index
/// varies fastest.
pub fn embed_pair(m: &DMatrix<Complex64>, a: usize, b: usize, local_dim: usize) -> DMatrix<Complex64> {
    assert!(a >= 1 && b <= 3 && a < b);
    let n = local_dim;
    let n3 = n * n * n;
    let mut out = DMatrix::zeros(n3, n3);
    let third = 6 - a - b; // the untouched slot
    for i in 0..n3 {
        let idx = [i % n, (i / n) % n, i / (n * n)];
        for r in 0..n * n {
            let (ra, rb) = (r % n, r / n);
            let col_pair = idx[a - 1] + n * idx[b - 1];
            let c = m[(r, col_pair)];
            if c.norm() == 0.0 {
                continue;
            }
            let mut jdx = [0usize; 3];
            jdx[a - 1] = ra;
            jdx[b - 1] = rb;
            jdx[third - 1] = idx[third - 1];
            let j = jdx[0] + n * jdx[1] + n * n * jdx[2];
            out[(j, i)] += c;
        }
    }
    out
}

/// Frobenius norm of
/// `R12(u) R13(u+v) R23(v) - R23(v) R13(u+v) R12(u)`.
pub fn qybe_residual(family: &RMatrixFamily, u: f64, v: f64, hbar: f64) -> Result<f64> {
    if u == 0.0 || v == 0.0 || u + v == 0.0 {
        return Err(RMatrixError::PoleArgument);
    }
    let n = family.local_dim;
    let r12 = embed_pair(&family.eval(u, hbar)?, 1, 2, n);
    let r13 = embed_pair(&family.eval(u + v, hbar)?, 1, 3, n);
    let r23 = embed_pair(&family.eval(v, hbar)?, 2, 3, n);
    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    Ok((lhs - rhs).norm())
}

/// Max QYBE residual over a sample grid.
pub fn qybe_grid(
    family: &RMatrixFamily,
    us: &[f64],
    vs: &[f64],
    hbars: &[f64],
    parallel: bool,
) -> Result<f64> {
    let mut args = Vec::new();
    for &u in us {
        for &v in vs {
            for &h in hbars {
                args.push((u, v, h));
            }
        }
    }
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let res: Result<Vec<f64>> = args
            .par_iter()
            .map(|&(u, v, h)| qybe_residual(family, u, v, h))
            .collect();
        return Ok(res?.into_iter().fold(0.0, f64::max));
    }
    let _ = parallel;
    let mut worst = 0.0f64;
    for (u, v, h) in args {
        worst = worst.max(qybe_residual(family, u, v, h)?);
    }
    Ok(worst)
}

/// First and second derivative in `hbar` at zero by Richardson-refined
/// central differences.
fn hbar_derivatives(
    family: &RMatrixFamily,
    u: f64,
    base_h: f64,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let d1 = |h: f64| -> Result<DMatrix<Complex64>> {
        Ok((family.eval(u, h)? - family.eval(u, -h)?) / Complex64::new(2.0 * h, 0.0))
    };
    let r0 = family.eval(u, 0.0)?;
    let d2 = |h: f64| -> Result<DMatrix<Complex64>> {
        Ok((family.eval(u, h)? - &r0 * Complex64::new(2.0, 0.0) + family.eval(u, -h)?) / Complex64::new(h * h, 0.0))
    };
    let first = richardson(&d1, base_h)?;
    let second = richardson(&d2, base_h)?;
    Ok((first, second))
}

fn richardson(
    f: &dyn Fn(f64) -> Result<DMatrix<Complex64>>,
    base_h: f64,
) -> Result<DMatrix<Complex64>> {
    // three-level Richardson table for an O(h^2) quantity
    let re = |x: f64| Complex64::new(x, 0.0);
    let a = f(base_h)?;
    let b = f(base_h / 2.0)?;
    let c = f(base_h / 4.0)?;
    let ab = (&b * re(4.0) - &a) / re(3.0);
    let bc = (&c * re(4.0) - &b) / re(3.0);
    let out = (&bc * re(16.0) - &ab) / re(15.0);
    let change = (&bc - &ab).norm();
    if change > 1e-6 * (1.0 + out.norm()) {
        return Err(RMatrixError::NoConvergence(change));
    }
    Ok(out)
}

/// Extracted expansion terms `R = 1 + i hbar r + hbar^2 s + O(hbar^3)`.
pub struct SemiclassicalTerms {
    pub r: DMatrix<Complex64>,
    pub s: DMatrix<Complex64>,
}

pub fn semiclassical_extract(family: &RMatrixFamily, u: f64) -> Result<SemiclassicalTerms> {
    let (d1, d2) = hbar_derivatives(family, u, 1e-2)?;
    Ok(SemiclassicalTerms {
        r: d1 * Complex64::new(0.0, -1.0),
        s: d2 * Complex64::new(0.5, 0.0),
    })
}

/// Classical Yang-Baxter residual
/// `|[r12, r13] + [r12, r23] + [r13, r23]|_F` for `r` at arguments
/// `u`, `u+v`, `v`.
pub fn cybe_residual(
    r_of: &dyn Fn(f64) -> Result<DMatrix<Complex64>>,
    u: f64,
    v: f64,
    local_dim: usize,
) -> Result<f64> {
    let r12 = embed_pair(&r_of(u)?, 1, 2, local_dim);
    let r13 = embed_pair(&r_of(u + v)?, 1, 3, local_dim);
    let r23 = embed_pair(&r_of(v)?, 2, 3, local_dim);
    let comm = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b - b * a;
    Ok((comm(&r12, &r13) + comm(&r12, &r23) + comm(&r13, &r23)).norm())
}

/// Per-sample numbers behind the unitarity proposition.
#[derive(Clone, Debug, Serialize)]
pub struct UnitarityReport {
    pub u: f64,
    /// deviation of `R12(u) R21(-u)` from a scalar matrix
    pub unitarity_scalar_dev: f64,
    /// deviation of `R12(u, hbar) - R21(-u, -hbar)` (symmetry condition)
    pub symmetry_dev: f64,
    /// deviation of `r^2/2 + s` from a scalar matrix
    pub rs_scalar_dev: f64,
    /// `| r^2/2 + s - (1/4) d^2f/dhbar^2 I |`
    pub proposition_dev: f64,
    pub pass: bool,
}

/// Check `R12(u) R21(-u) = f I` and the `hbar` reflection symmetry, then
/// the consequence: `r(u)^2/2 + s(u)` is scalar and equals
/// `(1/4) f''(u, 0) I`.
pub fn unitarity_proposition_check(
    family: &RMatrixFamily,
    us: &[f64],
    hbar_probe: f64,
    tol: f64,
) -> Result<Vec<UnitarityReport>> {
    let n = family.local_dim;
    let n2 = n * n;
    let p = flip(n);
    let mut out = Vec::new();
    for &u in us {
        // unitarity at a probe hbar
        let r12 = family.eval(u, hbar_probe)?;
        let r21_neg = &p * family.eval(-u, hbar_probe)? * &p;
        let prod = &r12 * &r21_neg;
        let scal = prod.trace() / Complex64::new(n2 as f64, 0.0);
        let unit_dev = (&prod - DMatrix::identity(n2, n2) * scal).norm();
        // symmetry R12(u, hbar) = R21(-u, -hbar)
        let sym_dev = (&r12 - &p * family.eval(-u, -hbar_probe)? * &p).norm();
        // expansion terms and the scalar they must equal
        let terms = semiclassical_extract(family, u)?;
        let rs = (&terms.r * &terms.r) * Complex64::new(0.5, 0.0) + &terms.s;
        let rs_scal = rs.trace() / Complex64::new(n2 as f64, 0.0);
        let rs_dev = (&rs - DMatrix::identity(n2, n2) * rs_scal).norm();
        // f(u, hbar) as the scalar of the unitarity product; second
        // hbar-derivative at zero by Richardson central differences.
        let f_of = |h: f64| -> Result<Complex64> {
            let prod = family.eval(u, h)? * (&p * family.eval(-u, h)? * &p);
            Ok(prod.trace() / Complex64::new(n2 as f64, 0.0))
        };
        let f0 = f_of(0.0)?;
        let d2 = |h: f64| -> Result<Complex64> {
            Ok((f_of(h)? - f0 * 2.0 + f_of(-h)?) / (h * h))
        };
        let (a, b, c) = (d2(1e-2)?, d2(5e-3)?, d2(2.5e-3)?);
        let ab = (b * 4.0 - a) / 3.0;
        let bc = (c * 4.0 - b) / 3.0;
        let fpp = (bc * 16.0 - ab) / 15.0;
        let prop_dev = (&rs - DMatrix::identity(n2, n2) * (fpp / 4.0)).norm();
        out.push(UnitarityReport {
            u,
            unitarity_scalar_dev: unit_dev,
            symmetry_dev: sym_dev,
            rs_scalar_dev: rs_dev,
            proposition_dev: prop_dev,
            pass: unit_dev <= tol && sym_dev <= tol && rs_dev <= tol && prop_dev <= tol,
        });
    }
    Ok(out)
}
