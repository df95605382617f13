use thiserror::Error;

use crate::geometry::Manifold;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator index {index} is out of range 1..={count} for {manifold}")]
    InvalidGenerator {
        manifold: Manifold,
        index: usize,
        count: usize,
    },

    #[error("manifold mismatch: expected {expected}, found {found}")]
    ManifoldMismatch { expected: Manifold, found: Manifold },

    #[error("quadrature rule of exact degree {exact} cannot resolve degree {required}")]
    InsufficientQuadrature { exact: usize, required: usize },

    #[error("polynomial term of degree {found} exceeds the requested degree {limit}")]
    DegreeOverflow { found: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
