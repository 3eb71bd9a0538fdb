//! Quantum Hamiltonian fields `x -> H^(1)_k(x)` on the spin space.

use crate::{HybridError, Result};
use classical_cms::PhasePoint;
use exactfun::{RationalFunction, Var};
use nalgebra::DMatrix;
use num_complex::Complex64;
use spinspace::{Perm, SpinOperator};
use std::collections::BTreeMap;

/// Hermiticity tolerance for evaluated fields.
pub const HERMITICITY_TOL: f64 = 1e-12;

enum Backend {
    /// `H^(1)_1 = 0`: the degree-1 Hamiltonian has no first-order part.
    Zero,
    /// `-1/2 sum_{i!=j} z_i z_j/(z_i-z_j)^2 P_ij`
    Explicit2,
    /// `-sum_{i!=j} z_i z_j p_i/(z_i-z_j)^2 P_ij
    ///  - 1/3 sum_{i!=j!=k} triple P_jk P_ij`
    Explicit3,
    /// Exact first-order table from the operator algebra.
    Table(BTreeMap<Perm, RationalFunction>),
}

/// Evaluator for the first-order quantum Hamiltonian of degree `k`.
pub struct HamiltonianField {
    pub k: u32,
    pub sites: usize,
    pub local_dim: usize,
    backend: Backend,
}

impl HamiltonianField {
    /// Degrees 2 and 3 use the displayed closed forms; degree 4 builds
    /// the exact table through the operator algebra (subject to its
    /// cost guards). Degree 1 is the zero field.
    pub fn new(k: u32, sites: usize, local_dim: usize) -> Result<Self> {
        let backend = match k {
            1 => Backend::Zero,
            2 => Backend::Explicit2,
            3 => Backend::Explicit3,
            4 => {
                let alg = heckerep::OpAlgebra::new(sites, heckerep::Kind::Quantum);
                let h = heckerep::symmetric_hamiltonian(&alg, k)?;
                let split = heckerep::semiclassical_split(&heckerep::restrict_to_symmetric(&h)?)?;
                Backend::Table(split.h1)
            }
            _ => return Err(HybridError::UnsupportedDegree(k)),
        };
        Ok(HamiltonianField {
            k,
            sites,
            local_dim,
            backend,
        })
    }

    /// Evaluate to a dense operator; errors on collisions and on loss of
    /// Hermiticity (which would signal a convention bug).
    pub fn eval(&self, x: &PhasePoint) -> Result<SpinOperator> {
        assert_eq!(x.n(), self.sites);
        x.collision_guard()?;
        let dim = self.local_dim.pow(self.sites as u32);
        let z = x.z();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        match &self.backend {
            Backend::Zero => {}
            Backend::Explicit2 => {
                for i in 0..self.sites {
                    for j in 0..self.sites {
                        if i == j {
                            continue;
                        }
                        let c = -0.5 * pair(z[i], z[j]);
                        let p = SpinOperator::permutation(i + 1, j + 1, self.sites, self.local_dim)
                            .expect("sites distinct")
                            .matrix()?;
                        m += p * c;
                    }
                }
            }
            Backend::Explicit3 => {
                for i in 0..self.sites {
                    for j in 0..self.sites {
                        if i == j {
                            continue;
                        }
                        let c = -pair(z[i], z[j]) * Complex64::new(x.p[i], 0.0);
                        let p = SpinOperator::permutation(i + 1, j + 1, self.sites, self.local_dim)
                            .expect("sites distinct")
                            .matrix()?;
                        m += p * c;
                    }
                }
                for i in 0..self.sites {
                    for j in 0..self.sites {
                        for k in 0..self.sites {
                            if i == j || j == k || i == k {
                                continue;
                            }
                            let c = -triple(z[i], z[j], z[k]) / 3.0;
                            let sigma = Perm::transposition(self.sites, j + 1, k + 1)
                                .compose(&Perm::transposition(self.sites, i + 1, j + 1));
                            let p = SpinOperator::from_perm(&sigma, self.local_dim).matrix()?;
                            m += p * c;
                        }
                    }
                }
            }
            Backend::Table(table) => {
                let mut pt = BTreeMap::new();
                for (i, zi) in z.iter().enumerate() {
                    pt.insert(Var::Z(i as u32 + 1), *zi);
                }
                for (i, &pi) in x.p.iter().enumerate() {
                    pt.insert(Var::P(i as u32 + 1), Complex64::new(pi, 0.0));
                }
                pt.insert(Var::Hbar, Complex64::new(0.0, 0.0));
                pt.insert(Var::Lambda, Complex64::new(0.0, 0.0));
                for (sigma, f) in table {
                    let c = f.eval_complex(&pt)?;
                    let p = SpinOperator::from_perm(sigma, self.local_dim).matrix()?;
                    m += p * c;
                }
            }
        }
        let op = SpinOperator::from_dense(self.sites, self.local_dim, m);
        if !op.is_hermitian(HERMITICITY_TOL)? {
            return Err(HybridError::NotHermitian(self.k));
        }
        Ok(op)
    }
}

fn pair(zi: Complex64, zj: Complex64) -> Complex64 {
    zi * zj / ((zi - zj) * (zi - zj))
}

fn triple(zi: Complex64, zj: Complex64, zk: Complex64) -> Complex64 {
    zi * zj * zk / ((zi - zj) * (zj - zk) * (zk - zi))
}

/// `M_k(x_*)`: the quantum Hamiltonian at the freezing point. `M_2` is
/// the long-range `1/sin^2` pair-exchange chain.
pub fn haldane_shastry(k: u32, n: usize, local_dim: usize) -> Result<SpinOperator> {
    let field = HamiltonianField::new(k, n, local_dim)?;
    field.eval(&classical_cms::freezing_point(n))
}

/// The `1/sin^2` pair-coupling form of the degree-2 operator at the
/// freezing point, built independently:
/// `sum_{i<j} P_ij / (4 sin^2(pi (i-j)/n))`.
pub fn haldane_shastry_sin2(n: usize, local_dim: usize) -> Result<SpinOperator> {
    let dim = local_dim.pow(n as u32);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let s = (std::f64::consts::PI * (i as f64 - j as f64) / n as f64).sin();
            let c = Complex64::new(0.25 / (s * s), 0.0);
            let p = SpinOperator::permutation(i, j, n, local_dim)
                .expect("sites distinct")
                .matrix()?;
            m += p * c;
        }
    }
    Ok(SpinOperator::from_dense(n, local_dim, m))
}
