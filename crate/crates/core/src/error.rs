//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the evaluators in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested measure/operation combination has no implementation.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A refinement or tail-decay check failed, so the result cannot be
    /// certified at the requested accuracy.
    #[error("not converged: {0}")]
    NotConverged(String),

    /// Reading a grid mask or configuration file failed.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A mask or configuration file was syntactically malformed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
