//! Semiclassical machinery for the one-dimensional matrix Schrodinger
//! equation: classical shooting between the initial Lagrangian graph
//! and target fibers, Hamilton-Jacobi actions, amplitudes and Maslov
//! counts, spin transport along branches, assembly of the asymptotic
//! wavefunction, a split-step reference solver, and multi-time action
//! checks on commuting classical backgrounds.

mod assemble;
mod branch;
mod multitime;
mod reference;
mod symbol;

pub use assemble::{assemble, convergence_study, AssembledField, AssembleOptions, ConvergenceRow};
pub use branch::{
    endpoint_scan, hj_residual, integrate_branch, shoot, BranchData, ShootOptions,
};
pub use multitime::{
    lagrangian_check, multitime_action, path_independence_check, MultiTimeLeg, PathReport,
};
pub use reference::{
    free_gaussian_exact, grid as reference_grid, l2_distance, l2_norm, reference_solve,
    RefOptions,
};
pub use symbol::{Coeff, MatrixField, PhaseFn, Profile, ScalarSymbol, WkbProblem};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WkbError {
    #[error("caustic at the target: endpoint Jacobian {0:.3e}")]
    Caustic(f64),
    #[error("transport norm drift {0:.3e}")]
    NormDrift(f64),
    #[error("shooting did not converge at target q = {0}")]
    ShootingFailed(f64),
    #[error("reference solver requires a kinetic-plus-potential symbol")]
    UnsupportedSymbol,
    #[error("reference solver requires a momentum-independent matrix term")]
    MomentumDependentMatrix,
    #[error("grid under-resolution: {0}")]
    UnderResolved(String),
    #[error(transparent)]
    Classical(#[from] classical_cms::CmsError),
}

pub type Result<T> = std::result::Result<T, WkbError>;
