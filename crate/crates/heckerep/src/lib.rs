//! Dunkl operator algebra over the symmetric group: exact normal
//! ordering, symmetric Hamiltonians, restriction to the spin space,
//! semiclassical splitting and the identity suites built on them.

mod checks;
mod hamiltonian;
mod operator;

pub use checks::{
    generating_suite, hecke_suite, kcancel_suite, unity_suite, GeneratingCheck, IdentityReport,
    UnityCheck,
};
pub use hamiltonian::{
    displayed_h2, displayed_h3, displayed_hcm1_2, displayed_hcm1_3, pair_coupling, phat_power,
    restrict_to_symmetric, semiclassical_split, symmetric_hamiltonian, tables_equal,
    triple_coupling, RestrictedOperator, SplitHamiltonian, MAX_K, MAX_N,
};
pub use operator::{permute_fn, DerivIdx, Kind, NormalOrderedOperator, OpAlgebra};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HeckeError {
    #[error("site index {0} out of range for n={1}")]
    SiteOutOfRange(usize, usize),
    #[error("operands have different kind or size")]
    KindMismatch,
    #[error("cost guard exceeded: n={0}, k={1} (limits n<=4, k<=4)")]
    CostGuard(usize, u32),
    #[error("operator is not polynomial in hbar after momentum substitution: {0}")]
    NotPolynomialInHbar(String),
    #[error("classical part carries a non-identity spin word: {0}")]
    NonScalarClassicalPart(String),
    #[error(transparent)]
    Exact(#[from] exactfun::ExactError),
}

pub type Result<T> = std::result::Result<T, HeckeError>;
