use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A system size outside the supported range for the requested operation.
    #[error("size error: {0}")]
    Size(String),

    #[error("site {site} out of range for a chain of {num_sites} sites")]
    Index { site: usize, num_sites: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Input that violates a physical or numerical invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// The requested dense operation would exceed the supported dimension.
    #[error("resource error: {0}")]
    Resource(String),

    #[error("no consistent quasi-energy spacing within tolerance {tolerance:e}")]
    NoSpacing { tolerance: f64 },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_owned(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
