use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for this kind of input (e.g. a strict
    /// statistic requested on a general τ-graph).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A mathematical invariant that must hold on a correct build failed.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    /// A configured size ceiling would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
