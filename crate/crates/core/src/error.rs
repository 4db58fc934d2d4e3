use thiserror::Error;

/// Errors raised by the library operations.
///
/// Structural problems with a matrix (wrong shape, non-finite entries) are
/// kept apart from precondition failures on otherwise well-formed input, so
/// callers can tell "could not read this" from "this is not a pseudometric".
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sampling stalled after {draws} draws")]
    Sampling { draws: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
