use thiserror::Error;

/// Errors shared across the library surface.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("undefined input: {0}")]
    UndefinedInput(String),

    /// Computation refused because it would exceed the configured guard.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Caller violated a stated precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A partition cannot be encoded as a display matrix.
    #[error("encoding error: {0}")]
    Encoding(String),

    /// Bad user-facing input (CLI arguments, fixture names).
    #[error("usage error: {0}")]
    Usage(String),

    /// Interpolation had too few or mutually inconsistent samples.
    #[error("fit error: {0}")]
    Fit(String),

    /// A cache file failed its integrity check.
    #[error("cache corruption: {0}")]
    CacheCorrupt(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
