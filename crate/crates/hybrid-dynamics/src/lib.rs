//! Hybrid evolution engine: quantum spin Hamiltonians driven along
//! classical CMS orbits, with the transport, state-evolution, gauge,
//! zero-curvature and monodromy machinery built on them.

mod evolve;
mod field;

pub use evolve::{
    density_evolve, exp_i_hermitian, expectation_value, gauge_shift_check, heisenberg_evolve,
    heisenberg_propagator, hermitian_spectrum, monodromy, transport, zero_curvature_residual,
    GaugeReport, HybridDensity, TransportState, NORM_DRIFT_HARD,
};
pub use field::{haldane_shastry, haldane_shastry_sin2, HamiltonianField, HERMITICITY_TOL};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HybridError {
    #[error("no quantum Hamiltonian of degree {0} (supported: 1..=4)")]
    UnsupportedDegree(u32),
    #[error("evaluated degree-{0} Hamiltonian is not Hermitian")]
    NotHermitian(u32),
    #[error("transport norm drift {0:.3e} beyond the hard bound")]
    NormDrift(f64),
    #[error("propagator unitarity defect {0:.3e}")]
    NotUnitary(f64),
    #[error("density trace drift {0:.3e}")]
    TraceDrift(f64),
    #[error("density positivity loss: min eigenvalue {0:.3e}")]
    PositivityLoss(f64),
    #[error("orbit endpoint misses the start by {0:.3e}")]
    OrbitNotClosed(f64),
    #[error(transparent)]
    Classical(#[from] classical_cms::CmsError),
    #[error(transparent)]
    Hecke(#[from] heckerep::HeckeError),
    #[error(transparent)]
    Spin(#[from] spinspace::SpinError),
    #[error(transparent)]
    Exact(#[from] exactfun::ExactError),
}

pub type Result<T> = std::result::Result<T, HybridError>;
