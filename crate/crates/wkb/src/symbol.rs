//! Problem data: scalar symbols with real periodic coefficients, matrix
//! fields, initial phases and profiles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// A smooth `2 pi`-periodic real coefficient in closed form.
#[derive(Clone, Debug)]
pub enum Coeff {
    Const(f64),
    /// `amp * cos(q) + off`
    Cos { amp: f64, off: f64 },
    /// `amp * sin(q)`
    Sin { amp: f64 },
}

impl Coeff {
    pub fn value(&self, q: f64) -> f64 {
        match self {
            Coeff::Const(c) => *c,
            Coeff::Cos { amp, off } => amp * q.cos() + off,
            Coeff::Sin { amp } => amp * q.sin(),
        }
    }

    pub fn d1(&self, q: f64) -> f64 {
        match self {
            Coeff::Const(_) => 0.0,
            Coeff::Cos { amp, .. } => -amp * q.sin(),
            Coeff::Sin { amp } => amp * q.cos(),
        }
    }

    pub fn d2(&self, q: f64) -> f64 {
        match self {
            Coeff::Const(_) => 0.0,
            Coeff::Cos { amp, .. } => -amp * q.cos(),
            Coeff::Sin { amp } => -amp * q.sin(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Const(c) if *c == 0.0)
    }
}

/// `H^(0)(p, q) = sum_k A_k(q) p^k`, degree at most 4, real coefficients.
#[derive(Clone, Debug)]
pub struct ScalarSymbol {
    pub coeffs: Vec<Coeff>,
}

impl ScalarSymbol {
    /// `p^2/2 + V(q)`.
    pub fn kinetic_plus(v: Coeff) -> Self {
        ScalarSymbol {
            coeffs: vec![v, Coeff::Const(0.0), Coeff::Const(0.5)],
        }
    }

    pub fn free() -> Self {
        Self::kinetic_plus(Coeff::Const(0.0))
    }

    /// `(V(q), 1/2)` shape check used by the reference solver.
    pub fn as_kinetic_plus_potential(&self) -> Option<&Coeff> {
        if self.coeffs.len() == 3
            && self.coeffs[1].is_zero()
            && matches!(self.coeffs[2], Coeff::Const(c) if c == 0.5)
        {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn h(&self, p: f64, q: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a.value(q) * p.powi(k as i32))
            .sum()
    }

    pub fn h_p(&self, p: f64, q: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| k as f64 * a.value(q) * p.powi(k as i32 - 1))
            .sum()
    }

    pub fn h_q(&self, p: f64, q: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a.d1(q) * p.powi(k as i32))
            .sum()
    }

    pub fn h_pp(&self, p: f64, q: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .map(|(k, a)| (k * (k - 1)) as f64 * a.value(q) * p.powi(k as i32 - 2))
            .sum()
    }

    pub fn h_pq(&self, p: f64, q: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| k as f64 * a.d1(q) * p.powi(k as i32 - 1))
            .sum()
    }

    pub fn h_qq(&self, p: f64, q: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a.d2(q) * p.powi(k as i32))
            .sum()
    }
}

/// Hermitian matrix term of the Hamiltonian.
pub enum MatrixField {
    Zero(usize),
    Const(DMatrix<Complex64>),
    /// `q`-dependent only (reference-solver compatible).
    Position(usize, Box<dyn Fn(f64) -> DMatrix<Complex64> + Send + Sync>),
    /// Full `(p, q)` dependence (transport-level identities only).
    Full(usize, Box<dyn Fn(f64, f64) -> DMatrix<Complex64> + Send + Sync>),
}

impl MatrixField {
    pub fn dim(&self) -> usize {
        match self {
            MatrixField::Zero(n) => *n,
            MatrixField::Const(m) => m.nrows(),
            MatrixField::Position(n, _) => *n,
            MatrixField::Full(n, _) => *n,
        }
    }

    pub fn eval(&self, p: f64, q: f64) -> DMatrix<Complex64> {
        match self {
            MatrixField::Zero(n) => DMatrix::zeros(*n, *n),
            MatrixField::Const(m) => m.clone(),
            MatrixField::Position(_, f) => f(q),
            MatrixField::Full(_, f) => f(p, q),
        }
    }

    pub fn momentum_independent(&self) -> bool {
        !matches!(self, MatrixField::Full(_, _))
    }
}

/// Initial real phase `f(q)` with two derivatives.
#[derive(Clone, Debug)]
pub enum PhaseFn {
    /// `a (q - c)`
    Linear { a: f64, c: f64 },
    /// `amp cos(q)`
    Cos { amp: f64 },
}

impl PhaseFn {
    pub fn value(&self, q: f64) -> f64 {
        match self {
            PhaseFn::Linear { a, c } => a * (q - c),
            PhaseFn::Cos { amp } => amp * q.cos(),
        }
    }

    pub fn d1(&self, q: f64) -> f64 {
        match self {
            PhaseFn::Linear { a, .. } => *a,
            PhaseFn::Cos { amp } => -amp * q.sin(),
        }
    }

    pub fn d2(&self, q: f64) -> f64 {
        match self {
            PhaseFn::Linear { .. } => 0.0,
            PhaseFn::Cos { amp } => -amp * q.cos(),
        }
    }
}

/// Compactly concentrated initial profile: a Gaussian envelope carrying
/// a fixed spinor.
#[derive(Clone, Debug)]
pub struct Profile {
    pub center: f64,
    pub sigma: f64,
    pub spinor: DVector<Complex64>,
}

impl Profile {
    pub fn eval(&self, q: f64) -> DVector<Complex64> {
        let env = (std::f64::consts::PI * self.sigma * self.sigma).powf(-0.25)
            * (-(q - self.center) * (q - self.center) / (2.0 * self.sigma * self.sigma)).exp();
        &self.spinor * Complex64::new(env, 0.0)
    }
}

/// The full semiclassical problem on a periodic domain of length
/// `2 pi`, centred at zero.
pub struct WkbProblem {
    pub symbol: ScalarSymbol,
    pub h1: MatrixField,
    pub phase: PhaseFn,
    pub profile: Profile,
}

impl WkbProblem {
    pub fn spin_dim(&self) -> usize {
        self.h1.dim()
    }

    /// Initial data `psi(0, q) = e^{i f(q)/hbar} phi(q)`.
    pub fn initial_state(&self, q: f64, hbar: f64) -> DVector<Complex64> {
        let phase = Complex64::new(0.0, self.phase.value(q) / hbar).exp();
        self.profile.eval(q) * phase
    }
}

/// Principal wrap into `[-pi, pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x % two_pi;
    if y < -std::f64::consts::PI {
        y += two_pi;
    }
    if y >= std::f64::consts::PI {
        y -= two_pi;
    }
    y
}
