use thiserror::Error;

/// Failure kinds shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or out-of-range input.
    #[error("input error: {0}")]
    Input(String),
    /// The request would exceed a configured resource ceiling.
    #[error("resource limit: {0}")]
    Resource(String),
    /// The configuration collapses (for example a root coincides with the base point).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A stated hypothesis does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A numeric certificate could not be produced even after raising precision.
    #[error("precision exhausted: {0}")]
    Precision(String),
    /// The input type is outside what the toolkit handles.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// Evaluation at a pole of a local height.
    #[error("pole: {0}")]
    Pole(String),
}

pub type Result<T> = std::result::Result<T, Error>;
