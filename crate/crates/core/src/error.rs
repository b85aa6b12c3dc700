use thiserror::Error;

/// Errors raised by the approximation pipeline.
#[derive(Debug, Error)]
pub enum FcError {
    /// An argument or parameter bundle violates a precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine could not produce a meaningful result.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The requested extension method cannot run on the supplied input.
    #[error("method error: {0}")]
    Method(String),

    /// A normalisation by zero was requested.
    #[error("division error: {0}")]
    Division(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FcError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(FcError::Domain(msg.into()))
}
