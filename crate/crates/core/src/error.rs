//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter is outside its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Point dimensions disagree (between cloud entries, or cloud vs query).
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A coordinate or value that must be finite is NaN or infinite.
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    /// Input collection is empty where at least one element is required.
    #[error("empty input: {what}")]
    EmptyInput { what: &'static str },

    /// A distance matrix is not symmetric / has a nonzero diagonal / negative
    /// entries.
    #[error("invalid distance matrix: {reason}")]
    InvalidDistanceMatrix { reason: String },

    /// A filtration violates monotonicity or face closure; reduction refuses
    /// to repair it.
    #[error("invalid filtration: {reason}")]
    InvalidFiltration { reason: String },

    /// Two diagrams with different sublevel/superlevel orientations were
    /// compared.
    #[error("diagram orientation mismatch")]
    OrientationMismatch,

    /// Parse or format error while reading a serialized artifact.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
