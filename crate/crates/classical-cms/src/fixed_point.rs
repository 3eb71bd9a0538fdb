//! The equal-spacing zero-momentum configuration and its fixed-point
//! verification through the generating-function minors.

use crate::{grad_hamiltonian, lax, PhasePoint, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// `p_i = 0`, `z_k = exp(2 pi i k / n)` for `k = 1..n`.
pub fn freezing_point(n: usize) -> PhasePoint {
    assert!(n >= 2);
    let q = (1..=n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
    PhasePoint::new(vec![0.0; n], q)
}

/// Per-lambda residuals of the fixed-point identities.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub n: usize,
    pub lambdas: Vec<f64>,
    /// max_i |G_i(lambda, 0, zeta)| over i and lambda samples
    pub max_g: f64,
    /// max over lambda of (max_i F_i - min_i F_i), F values being complex
    /// the spread is measured in modulus
    pub f_spread: f64,
    /// spread of dH_k/dp_i across i, maximized over k = 2..n
    pub dp_spread: f64,
    /// max_i |dH_k/dq_i|, maximized over k = 2..n
    pub dq_max: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Verify that the differential of `det(lambda + L)` vanishes at the
/// freezing point on the zero-momentum subspace:
/// all `F_i` agree, all `G_i` vanish, and each `dH_k` restricted to
/// `sum dp = 0` lies in the span of `dH_1`.
pub fn verify_fixed_point(n: usize, lambdas: &[f64], tol: f64) -> Result<FixedPointReport> {
    let x = freezing_point(n);
    let z = x.z();
    let m = lax(&x)?.off;
    let mut max_g: f64 = 0.0;
    let mut f_spread: f64 = 0.0;
    for &lam in lambdas {
        let a = &m + DMatrix::<Complex64>::identity(n, n) * Complex64::new(lam, 0.0);
        // F_i = det(lambda + M with row/column i removed)
        let mut fs = Vec::with_capacity(n);
        for i in 0..n {
            fs.push(minor_det(&a, i));
        }
        let spread = fs
            .iter()
            .flat_map(|u| fs.iter().map(move |v| (u - v).norm()))
            .fold(0.0, f64::max);
        f_spread = f_spread.max(spread);
        // G_i = d/dz_i det(lambda + M), by the Jacobi formula.
        let det = a.clone().lu().determinant();
        let inv = a
            .clone()
            .lu()
            .try_inverse()
            .expect("lambda sample away from the Lax spectrum");
        for i in 0..n {
            let mut tr = Complex64::new(0.0, 0.0);
            for b in 0..n {
                if b == i {
                    continue;
                }
                let drow = -z[b] / ((z[i] - z[b]) * (z[i] - z[b]));
                let dcol = z[b] / ((z[b] - z[i]) * (z[b] - z[i]));
                tr += inv[(i, b)] * dcol + inv[(b, i)] * drow;
            }
            max_g = max_g.max((det * tr).norm());
        }
    }
    // Gradient route: dH_k at the fixed point.
    let mut dp_spread: f64 = 0.0;
    let mut dq_max: f64 = 0.0;
    for k in 2..=n as u32 {
        let g = grad_hamiltonian(k, &x)?;
        let mx = g.dp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mn = g.dp.iter().cloned().fold(f64::INFINITY, f64::min);
        dp_spread = dp_spread.max(mx - mn);
        dq_max = dq_max.max(g.dq.iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    let pass = max_g <= tol && f_spread <= tol && dp_spread <= tol && dq_max <= tol;
    Ok(FixedPointReport {
        n,
        lambdas: lambdas.to_vec(),
        max_g,
        f_spread,
        dp_spread,
        dq_max,
        tol,
        pass,
    })
}

fn minor_det(a: &DMatrix<Complex64>, drop: usize) -> Complex64 {
    let n = a.nrows();
    if n == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let mut b = DMatrix::zeros(n - 1, n - 1);
    let mut r2 = 0;
    for r in 0..n {
        if r == drop {
            continue;
        }
        let mut c2 = 0;
        for c in 0..n {
            if c == drop {
                continue;
            }
            b[(r2, c2)] = a[(r, c)];
            c2 += 1;
        }
        r2 += 1;
    }
    b.lu().determinant()
}
