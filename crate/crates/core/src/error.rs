use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A site or interval does not belong to the domain it was used with.
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument violates a precondition (bad interval, mismatched partition, ...).
    #[error("argument error: {0}")]
    Argument(String),
    /// A numeric input is outside the supported range of a series evaluation.
    #[error("range error: {0}")]
    Range(String),
    /// A numeric computation failed (non-convergence, rank deficiency, ...).
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
