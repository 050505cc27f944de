use thiserror::Error;

/// Errors raised by evaluators, samplers and the run front-end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation produced a non-finite or out-of-range value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A run configuration failed validation.
    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Prefixes the message with the location of the failure, keeping the kind.
    pub fn at(self, place: impl std::fmt::Display) -> Self {
        match self {
            Error::Domain(m) => Error::Domain(format!("{place}: {m}")),
            Error::Numeric(m) => Error::Numeric(format!("{place}: {m}")),
            Error::Config(m) => Error::Config(format!("{place}: {m}")),
            other => other,
        }
    }

    /// Process exit code: 3 for numeric failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn numeric<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Numeric(msg.into()))
}
