use std::io;

use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A sequence was shorter than the operation requires.
    #[error("length error: need {needed} terms, have {available}")]
    Length { needed: usize, available: usize },

    /// The request would exceed a memory or enumeration budget.
    #[error("resource error: {0}")]
    Resource(String),

    /// An iterative solver failed to converge.
    #[error("numeric error: {message}")]
    Numeric { message: String, trace: Vec<f64> },

    /// Malformed experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Short machine-readable code used on the diagnostic stream.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Length { .. } => "length",
            Error::Resource(_) => "resource",
            Error::Numeric { .. } => "numeric",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code: 2 for resource exhaustion, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 2,
            _ => 1,
        }
    }
}
