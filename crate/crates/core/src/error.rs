//! Crate-wide error type.

use thiserror::Error;

use crate::config::ConfigError;

/// Errors raised by library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Configuration construction or parsing failed.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// An argument lies outside the operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// Vector or grid dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A search region contained no points.
    #[error("empty region: {0}")]
    EmptyRegion(String),
    /// File output failed.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used across the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;
