//! Error type for the experiment driver.

use thiserror::Error;

/// Errors raised while configuring or running an experiment.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// The experiment configuration is unusable as given.
    #[error("configuration error: {0}")]
    Config(String),

    /// A file could not be read or written.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// The solver library rejected the instance or failed while running.
    #[error(transparent)]
    Solver(#[from] block_krylov::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, HarnessError>;
