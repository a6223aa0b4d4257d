//! Error type shared across the library.

use thiserror::Error;

/// Errors produced while building matrices, parsing files, or running solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or vector dimensions are inconsistent with the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Structural invariants of a matrix representation are violated.
    #[error("invalid matrix structure: {0}")]
    InvalidStructure(String),

    /// A file could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A triangular solve hit a zero diagonal entry at the given 0-based index.
    #[error("singular triangular factor: zero diagonal at index {0}")]
    SingularTriangular(usize),

    /// A direct factorization detected an exactly singular matrix.
    #[error("singular matrix in direct factorization: {0}")]
    SingularFactor(String),

    /// Caller-supplied data is unusable (zero right-hand side, empty block, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
