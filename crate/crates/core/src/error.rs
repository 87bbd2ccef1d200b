//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("infeasible parameters (t too large for L, M, e): {0}")]
    Infeasible(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no repelling vector exists for the given prefixes")]
    NoRepellingVector,

    #[error("corrupt codeword ({0})")]
    CorruptCodeword(String),

    #[error("cluster {0} empty")]
    EmptyCluster(String),

    #[error("missing ground truth: {0}")]
    MissingGroundTruth(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by unreadable or ill-formed external data,
    /// as opposed to domain-level failures on well-formed inputs.
    pub fn is_io_or_parse(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
