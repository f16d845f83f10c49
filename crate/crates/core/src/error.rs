use thiserror::Error;

/// Errors produced by graph parsing, oracle guards, sampler configuration
/// and generator preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("graph parse error: {0}")]
    Parse(String),

    /// A precondition on a domain parameter was violated (wrong evaluation
    /// region, infeasible spec, guard exceeded, ...).
    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// Process exit code the CLI maps this error to: 1 for i/o and parse
    /// failures, 2 for domain/precondition violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse(_) => 1,
            Error::Domain(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
