//! Direct grid reference: Strang-split unitary evolution of
//! `i hbar dpsi/dt = (p^2/2 + V(q)) psi + hbar H^(1)(q) psi` on a
//! periodic domain, and the closed-form free Gaussian.

use crate::symbol::WkbProblem;
use crate::{Result, WkbError};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct RefOptions {
    pub grid_points: usize,
    pub time_steps: usize,
}

impl Default for RefOptions {
    fn default() -> Self {
        RefOptions {
            grid_points: 1024,
            time_steps: 4000,
        }
    }
}

/// Uniform grid on `[-pi, pi)`.
pub fn grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| -PI + 2.0 * PI * i as f64 / points as f64)
        .collect()
}

/// Solve on the periodic box and return the field on the grid
/// (outer index: grid point; inner: spin component). The symbol must be
/// kinetic-plus-potential and the matrix term momentum independent.
pub fn reference_solve(
    problem: &WkbProblem,
    hbar: f64,
    t: f64,
    opts: &RefOptions,
) -> Result<Vec<DVector<Complex64>>> {
    let v_coeff = problem
        .symbol
        .as_kinetic_plus_potential()
        .ok_or(WkbError::UnsupportedSymbol)?;
    if !problem.h1.momentum_independent() {
        return Err(WkbError::MomentumDependentMatrix);
    }
    let m = opts.grid_points;
    let dim = problem.spin_dim();
    let qs = grid(m);
    let dt = t / opts.time_steps as f64;

    // Potential half-step factors: exp(-i dt/2 (V/hbar)) exp(-i dt/2 H1),
    // the scalar and matrix parts commute pointwise.
    let mut half_potential: Vec<DMatrix<Complex64>> = Vec::with_capacity(m);
    for &q in &qs {
        let v = v_coeff.value(q);
        let scalar = Complex64::new(0.0, -0.5 * dt * v / hbar).exp();
        let h1 = problem.h1.eval(0.0, q);
        let herm_dev = (&h1 - h1.adjoint()).norm();
        if herm_dev > 1e-12 {
            return Err(WkbError::UnderResolved(format!(
                "matrix term not Hermitian at q={q}: {herm_dev:.3e}"
            )));
        }
        let eig = nalgebra::SymmetricEigen::new(h1);
        let mut d = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            d[(i, i)] = (Complex64::new(0.0, -0.5 * dt) * eig.eigenvalues[i]).exp();
        }
        let u = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        half_potential.push(u * scalar);
    }
    // Kinetic full-step multipliers exp(-i dt hbar k^2 / 2).
    let mut kinetic = Vec::with_capacity(m);
    for j in 0..m {
        let jj = if j <= m / 2 { j as f64 } else { j as f64 - m as f64 };
        let k = jj; // domain length 2 pi
        kinetic.push(Complex64::new(0.0, -0.5 * dt * hbar * k * k).exp());
    }

    // state[s][i]: component s on grid point i
    let mut state: Vec<Vec<Complex64>> = (0..dim)
        .map(|s| {
            qs.iter()
                .map(|&q| problem.initial_state(q, hbar)[s])
                .collect()
        })
        .collect();
    let norm0 = field_norm(&state);

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    let ifft = planner.plan_fft_inverse(m);
    let apply_half_potential = |state: &mut Vec<Vec<Complex64>>| {
        for i in 0..m {
            let u = &half_potential[i];
            let mut in_vec = DVector::zeros(dim);
            for s in 0..dim {
                in_vec[s] = state[s][i];
            }
            let out = u * in_vec;
            for s in 0..dim {
                state[s][i] = out[s];
            }
        }
    };
    for _ in 0..opts.time_steps {
        apply_half_potential(&mut state);
        for comp in state.iter_mut() {
            fft.process(comp);
            for (a, k) in comp.iter_mut().zip(&kinetic) {
                *a *= k;
            }
            ifft.process(comp);
            let scale = Complex64::new(1.0 / m as f64, 0.0);
            for a in comp.iter_mut() {
                *a *= scale;
            }
        }
        apply_half_potential(&mut state);
    }
    let drift = (field_norm(&state) - norm0).abs();
    if drift > 1e-10 * (1.0 + norm0) {
        return Err(WkbError::UnderResolved(format!(
            "norm drift {drift:.3e} in the reference evolution"
        )));
    }
    Ok((0..m)
        .map(|i| DVector::from_iterator(dim, (0..dim).map(|s| state[s][i])))
        .collect())
}

fn field_norm(state: &[Vec<Complex64>]) -> f64 {
    let m = state[0].len();
    let dq = 2.0 * PI / m as f64;
    let s: f64 = state
        .iter()
        .flat_map(|comp| comp.iter().map(|a| a.norm_sqr()))
        .sum();
    (s * dq).sqrt()
}

/// Discrete `L^2` norm of a spin field sampled on the uniform grid.
pub fn l2_norm(field: &[DVector<Complex64>]) -> f64 {
    let dq = 2.0 * PI / field.len() as f64;
    let s: f64 = field.iter().map(|v| v.norm_squared()).sum();
    (s * dq).sqrt()
}

/// Discrete `L^2` distance, skipping masked points when a mask is given.
pub fn l2_distance(
    a: &[DVector<Complex64>],
    b: &[DVector<Complex64>],
    mask: Option<&[bool]>,
) -> f64 {
    assert_eq!(a.len(), b.len());
    let dq = 2.0 * PI / a.len() as f64;
    let mut s = 0.0;
    for i in 0..a.len() {
        if let Some(m) = mask {
            if m[i] {
                continue;
            }
        }
        s += (&a[i] - &b[i]).norm_squared();
    }
    (s * dq).sqrt()
}

/// Closed-form free evolution of the Gaussian packet
/// `psi_0 = (pi s^2)^{-1/4} exp(-(q-c)^2/(2 s^2)) exp(i a (q-c)/hbar) u`.
pub fn free_gaussian_exact(
    center: f64,
    sigma: f64,
    momentum: f64,
    spinor: &DVector<Complex64>,
    q: f64,
    t: f64,
    hbar: f64,
) -> DVector<Complex64> {
    let x = q - center;
    let spread = Complex64::new(1.0, hbar * t / (sigma * sigma));
    let norm = Complex64::new((PI * sigma * sigma).powf(-0.25), 0.0) / spread.sqrt();
    let phase = Complex64::new(0.0, (momentum * x - 0.5 * momentum * momentum * t) / hbar).exp();
    let xt = x - momentum * t;
    let envelope = (-Complex64::new(xt * xt, 0.0) / (2.0 * sigma * sigma * spread)).exp();
    spinor * (norm * phase * envelope)
}
