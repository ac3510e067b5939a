//! Crate-wide error type.

use std::path::Path;

/// Errors produced by loading, validating, or evaluating beamforming data.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A data file failed to parse; carries the origin (path or label) and
    /// the 1-based line number.
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    /// Inputs were well-formed but violate a documented precondition or
    /// invariant.
    #[error("{0}")]
    Validation(String),

    /// Underlying filesystem failure.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Convenience constructor for parse errors.
    pub fn parse(origin: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }

    /// Convenience constructor for validation errors.
    pub fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }

    /// Wraps an I/O error with the path it occurred on.
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// True if this error stems from a missing file — callers treat that as
    /// a usage problem rather than an environment failure.
    pub fn is_not_found(&self) -> bool {
        matches!(self, Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound)
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
