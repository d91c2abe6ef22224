use thiserror::Error;

/// Errors produced by the analysis routines and the file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {what} is {actual}, limit is {limit}")]
    Capacity {
        what: &'static str,
        actual: u64,
        limit: u64,
    },

    #[error("domain mismatch: C({0},{1}) vs C({2},{3})")]
    DomainMismatch(usize, usize, usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A checked mathematical claim failed. Callers treat this as a finding,
    /// not a usage problem.
    #[error("claim violated: {0}")]
    ClaimViolation(String),

    #[error("malformed input at {location}: {message}")]
    Format { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ClaimViolation(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
