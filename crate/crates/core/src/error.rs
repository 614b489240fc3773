use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MzError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree {requested} exceeds evaluator maximum {max}")]
    DegreeExceeded { requested: usize, max: usize },

    #[error("dimension mismatch: expected q = {expected}, got q = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported sphere dimension q = {q}: {reason}")]
    UnsupportedDimension { q: usize, reason: &'static str },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty point set")]
    EmptyPointSet,

    #[error("integer overflow evaluating {0}")]
    Overflow(&'static str),

    #[error("eigensolver failed to converge")]
    Eigensolver,
}

pub type Result<T> = std::result::Result<T, MzError>;

pub(crate) fn domain(msg: impl Into<String>) -> MzError {
    MzError::Domain(msg.into())
}
