use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments, malformed configuration or shape mismatch.
    #[error("usage error: {0}")]
    Usage(String),

    /// A parameter outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A state that should be positive semidefinite has a genuinely negative eigenvalue.
    #[error("positivity violated: eigenvalue {eigenvalue:e} below -1e-10")]
    Positivity { eigenvalue: f64 },

    /// The Jacobi eigensolver exhausted its sweep budget.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
