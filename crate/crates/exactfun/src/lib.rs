//! Exact arithmetic kernel: Gaussian-rational scalars and multivariate
//! Laurent rational functions with differentiation, evaluation and
//! canonical equality. All values are immutable after construction and
//! safe to share across threads.

mod error;
mod mpoly;
mod ratfun;
mod scalar;
mod vars;

pub use error::{ExactError, Result};
pub use mpoly::{MPoly, Monomial};
pub use ratfun::RationalFunction;
pub use scalar::GaussianRational;
pub use vars::{Var, VarSet, VarSetRef};
