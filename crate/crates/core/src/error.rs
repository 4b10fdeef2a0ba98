//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by dataset handling, training, and the swarm protocol.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration: bad architecture, unsupported condition,
    /// unsatisfiable scenario counts, degenerate normalization.
    #[error("configuration error: {0}")]
    Config(String),

    /// Invalid input to an operation: empty batch, non-finite value,
    /// nonpositive label.
    #[error("input error: {0}")]
    Input(String),

    /// Parameter vectors with mismatched architectures.
    #[error("shape error: {0}")]
    Shape(String),

    /// Credibility weight is undefined (p = n = 0 with alpha = 0).
    #[error("undefined weight: {0}")]
    UndefinedWeight(String),

    /// Merge weights sum to zero.
    #[error("degenerate merge: {0}")]
    DegenerateMerge(String),

    /// Malformed dataset row; `row` is the 1-based data row number.
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
