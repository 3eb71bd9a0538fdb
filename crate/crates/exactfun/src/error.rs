use thiserror::Error;

/// Errors from exact arithmetic operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by an identically zero rational function")]
    ZeroFunctionDivisor,
    #[error("unknown variable `{0}` for this variable set")]
    UnknownVariable(String),
    #[error("incompatible variable sets: `{0}` vs `{1}`")]
    IncompatibleVariables(String, String),
    #[error("unbound variable `{0}` at evaluation")]
    UnboundVariable(String),
    #[error("pole at the evaluation point (denominator vanishes)")]
    Pole,
    #[error("negative exponent of `{0}` at a zero value")]
    NegativePowerOfZero(String),
    #[error("variable `{0}` does not admit negative exponents")]
    NotLaurent(String),
}

pub type Result<T> = std::result::Result<T, ExactError>;
