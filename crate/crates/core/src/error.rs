use thiserror::Error;

/// Failure modes shared by every library operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A wave vector or parameter lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Certified evaluation could not reach the requested accuracy.
    #[error("precision budget exceeded: {0}")]
    Precision(String),
    /// A size guard or memory budget refused the computation.
    #[error("resource guard: {0}")]
    Resource(String),
    /// Input failed a structural check (non-resonant quartet, count-only set, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// The combination of inputs is deliberately not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Bad caller-supplied selector (format name, dispersion id, ...).
    #[error("usage error: {0}")]
    Usage(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
