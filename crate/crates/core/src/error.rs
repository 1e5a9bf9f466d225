use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (zero element,
    /// non-prime modulus, non-unit where a unit is required, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Shapes or groups of two operands do not match.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A configured size or magnitude cap was exceeded.
    #[error("limit exceeded: {0}")]
    Limit(String),
    /// The requested p-adic precision cannot be delivered.
    #[error("precision error: {0}")]
    Precision(String),
    /// A constructed object failed an internal consistency check.
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
