use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Caller supplied inconsistent or malformed input.
    #[error("usage error: {0}")]
    Usage(String),
    /// A configured resource cap was exceeded.
    #[error("resource limit exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: usize },
    /// An automatic structure failed an internal consistency requirement.
    #[error("integrity error: {0}")]
    Integrity(String),
    /// Input text could not be parsed.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn resource(what: impl Into<String>, limit: usize) -> Self {
        Error::Resource { what: what.into(), limit }
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
