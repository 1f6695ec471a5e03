use thiserror::Error;

/// Errors raised by the library.
///
/// Verification routines report a failed identity through their return
/// value; the variants here are reserved for invalid input and violated
/// preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polynomial is not homogeneous")]
    Heterogeneous,

    #[error("{vars} variables cannot represent a partition with {parts} parts")]
    BelowFaithfulness { vars: usize, parts: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(String),

    /// An internal cross-check disagreed; this indicates a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
