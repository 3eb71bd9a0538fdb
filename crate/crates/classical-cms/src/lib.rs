//! Classical trigonometric Calogero-Moser-Sutherland dynamics.
//!
//! Phase points live on the unit torus: coordinates are angles `q_i`
//! with `z_i = exp(i q_i)`, momenta are real. The Lax matrix
//! `L = diag(p) + M`, `M_ij = z_i/(z_i - z_j)`, generates the commuting
//! Hamiltonians `H_k = (1/k) tr L^k`; integration runs in `(p, q)` so
//! the torus constraint holds structurally.

mod exact;
mod fixed_point;
mod flow;

pub use exact::{lax_det_exact, newton_from_power_sums, tr_lax_power_exact, ExactMatrix};
pub use fixed_point::{freezing_point, verify_fixed_point, FixedPointReport};
pub use flow::{flow, Segment, Trajectory};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CmsError {
    #[error("coordinate collision: min |z_i - z_j| = {0:.3e}")]
    Collision(f64),
    #[error("collision during integration at t = {at_time}")]
    CollisionDuringFlow { at_time: f64, partial: Trajectory },
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("Hamiltonian is not real on the torus: imaginary part {0:.3e}")]
    NonReal(f64),
    #[error("trajectory endpoints differ by {0:.3e}; orbit is not closed")]
    NotClosed(f64),
    #[error(transparent)]
    Exact(#[from] exactfun::ExactError),
}

pub type Result<T> = std::result::Result<T, CmsError>;

/// Hard collision threshold on `min |z_i - z_j|`.
pub const COLLISION_TOL: f64 = 1e-8;

/// Point of the CMS phase space in torus coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl PhasePoint {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Self {
        assert_eq!(p.len(), q.len());
        PhasePoint { p, q }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn z(&self) -> Vec<Complex64> {
        self.q
            .iter()
            .map(|&q| Complex64::new(0.0, q).exp())
            .collect()
    }

    /// Smallest pairwise distance `|z_i - z_j|`.
    pub fn min_separation(&self) -> f64 {
        let z = self.z();
        let mut m = f64::INFINITY;
        for i in 0..z.len() {
            for j in (i + 1)..z.len() {
                m = m.min((z[i] - z[j]).norm());
            }
        }
        m
    }

    pub fn collision_guard(&self) -> Result<()> {
        if self.n() < 2 {
            return Ok(());
        }
        let s = self.min_separation();
        if s < COLLISION_TOL {
            Err(CmsError::Collision(s))
        } else {
            Ok(())
        }
    }

    /// Phase-space distance using chordal coordinates, insensitive to
    /// angle winding.
    pub fn dist(&self, other: &PhasePoint) -> f64 {
        let za = self.z();
        let zb = other.z();
        let mut s = 0.0;
        for i in 0..self.n() {
            s += (self.p[i] - other.p[i]).powi(2) + (za[i] - zb[i]).norm_sqr();
        }
        s.sqrt()
    }
}

/// The Lax matrix split `L = P + M`.
#[derive(Clone, Debug)]
pub struct LaxData {
    pub l: DMatrix<Complex64>,
    pub diag: DMatrix<Complex64>,
    pub off: DMatrix<Complex64>,
}

/// Build the Lax matrix at a phase point.
pub fn lax(x: &PhasePoint) -> Result<LaxData> {
    x.collision_guard()?;
    let n = x.n();
    let z = x.z();
    let mut diag = DMatrix::zeros(n, n);
    let mut off = DMatrix::zeros(n, n);
    for i in 0..n {
        diag[(i, i)] = Complex64::new(x.p[i], 0.0);
        for j in 0..n {
            if i != j {
                off[(i, j)] = z[i] / (z[i] - z[j]);
            }
        }
    }
    Ok(LaxData {
        l: &diag + &off,
        diag,
        off,
    })
}

/// `H_k = (1/k) tr L^k`; real on the torus up to roundoff.
pub fn hamiltonian(k: u32, x: &PhasePoint) -> Result<f64> {
    assert!(k >= 1);
    let l = lax(x)?.l;
    let mut pw = l.clone();
    for _ in 1..k {
        pw *= &l;
    }
    let tr = pw.trace() / Complex64::new(k as f64, 0.0);
    let scale = 1.0 + tr.norm();
    if tr.im.abs() > 1e-10 * scale {
        return Err(CmsError::NonReal(tr.im));
    }
    Ok(tr.re)
}

/// Cotangent components of `dH_k`: `dp_i = dH/dp_i` and
/// `dq_i = dH/dq_i = Re(i z_i dH/dz_i)`.
#[derive(Clone, Debug)]
pub struct Gradient {
    pub dp: Vec<f64>,
    pub dq: Vec<f64>,
}

/// Analytic gradient via `dH_k = tr(L^{k-1} dL)`.
pub fn grad_hamiltonian(k: u32, x: &PhasePoint) -> Result<Gradient> {
    assert!(k >= 1);
    let n = x.n();
    let z = x.z();
    let l = lax(x)?.l;
    let mut pw = DMatrix::identity(n, n);
    for _ in 1..k {
        pw *= &l;
    }
    let mut dp = vec![0.0; n];
    let mut dq = vec![0.0; n];
    for i in 0..n {
        dp[i] = pw[(i, i)].re;
        // z_i dM/dz_i has row i entries -z_i z_b/(z_i - z_b)^2 and
        // column i entries +z_a z_i/(z_a - z_i)^2.
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..n {
            if b == i {
                continue;
            }
            let row = -z[i] * z[b] / ((z[i] - z[b]) * (z[i] - z[b]));
            let col = z[b] * z[i] / ((z[b] - z[i]) * (z[b] - z[i]));
            // tr(L^{k-1} E) picks the transposed entries of L^{k-1}.
            acc += pw[(b, i)] * row + pw[(i, b)] * col;
        }
        dq[i] = (Complex64::i() * acc).re;
    }
    Ok(Gradient { dp, dq })
}

/// Poisson bracket from stored cotangent components:
/// `{f, g} = sum_j (f_p g_q - g_p f_q)_j`, matching the torus bracket
/// `{p_j, z_k} = i delta_jk z_k`.
pub fn poisson_bracket(f: &Gradient, g: &Gradient) -> f64 {
    f.dp.iter()
        .zip(&f.dq)
        .zip(g.dp.iter().zip(&g.dq))
        .map(|((fp, fq), (gp, gq))| fp * gq - gp * fq)
        .sum()
}

/// Complex-valued bracket for componentwise gradients of complex
/// observables.
pub fn poisson_bracket_complex(
    fp: &[Complex64],
    fq: &[Complex64],
    gp: &[Complex64],
    gq: &[Complex64],
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..fp.len() {
        acc += fp[j] * gq[j] - gp[j] * fq[j];
    }
    acc
}

/// Eigenvalues of the Lax matrix, sorted ascending. The Lax matrix is
/// Hermitian on the unit torus with real momenta, so the spectrum is
/// real (isospectrality diagnostics).
pub fn lax_spectrum(x: &PhasePoint) -> Result<Vec<f64>> {
    let l = lax(x)?.l;
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(l)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ev)
}
