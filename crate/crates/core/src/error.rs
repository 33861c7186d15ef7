use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CullisError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} is not a supported prime modulus")]
    InvalidPrime(u64),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("selection leaves an empty matrix")]
    EmptyResult,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("vector of length {got} cannot be reshaped to {n}x{k}")]
    LengthMismatch { got: usize, n: usize, k: usize },
    #[error("invalid shape: {0}")]
    ShapeError(String),
    #[error("resource guard: {what} needs {needed} elementary steps, limit is {limit}")]
    ResourceGuard { what: &'static str, needed: u128, limit: u128 },
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
    #[error("parity error: {0}")]
    ParityError(String),
    #[error("sign calibration failed for {0}")]
    CalibrationFailed(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CullisError>;
