use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicardError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("malformed record: {0}")]
    Record(String),
}

pub type Result<T> = std::result::Result<T, PicardError>;
