use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{value} is not {p}-local")]
    NonPLocalResult { value: String, p: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series is not of the form x + O(x^2)")]
    NotReversible,
    #[error("elements belong to different Stiefel contexts ({0} vs {1})")]
    MismatchedContext(String, String),
    #[error("parameter {0} is not a unit in Z_({1})")]
    NonUnitParameter(String, u64),
    #[error("unsupported context: {0}")]
    UnsupportedContext(String),
    #[error("index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("total degree {degree} lies outside the validity window 0..={window}")]
    TruncationTooSmall { degree: usize, window: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
