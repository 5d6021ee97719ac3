//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by network validation, code evaluation and searches.
#[derive(Debug, Error)]
pub enum Error {
    /// A network or code failed a structural well-formedness check.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Arguments violate a documented precondition of the operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A code could not be evaluated on the given network.
    #[error("evaluation failed: {0}")]
    Evaluation(String),

    /// Serialization or deserialization of an artifact failed.
    #[error("serialization failed: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
