//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad user-supplied value (dimension, range, unknown id, malformed file).
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },

    /// The quantum Fisher information matrix is singular, so no finite
    /// scalar bound exists for the full parameter vector.
    #[error("model not identifiable: {0}")]
    NotIdentifiable(String),

    /// The local-unbiasedness constraints admit no solution.
    #[error("locally unbiased estimator does not exist: {0}")]
    NoUnbiasedEstimator(String),

    /// The measurement's Fisher information matrix is rank deficient.
    #[error("parameters not jointly identifiable under this scheme: {0}")]
    SchemeNotIdentifiable(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid { what, why: why.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
