use thiserror::Error;

use crate::ni::Violation;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension {found}: at least {min} coordinates required")]
    InvalidDimension { found: usize, min: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid column pair ({i}, {j}) for order {n}")]
    InvalidColumns { i: usize, j: usize, n: usize },

    #[error("invalid range [{low}, {high}]: need low <= high <= 0")]
    InvalidRange { low: String, high: String },

    #[error("matrix is not normal: {0}")]
    NotNormal(Violation),

    #[error("matrix is not normal idempotent: {0}")]
    NotNi(Violation),

    #[error("inconsistent columns: {0}")]
    InconsistentColumns(String),

    #[error("no completion found after {attempts} attempts: {reason}")]
    CompletionFailed { attempts: usize, reason: String },

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("line type mismatch: given {given}, data give {actual}")]
    TypeMismatch { given: String, actual: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
