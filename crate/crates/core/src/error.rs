use thiserror::Error;

/// Errors raised by the library's exact algorithms and input handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("requires irreducible polynomial")]
    Reducible,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("terms indexed from 1")]
    TermIndexFromOne,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
