use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a physical or structural invariant.
    #[error("validation failed: {0}")]
    Validation(String),
    /// Arguments outside the domain of an operation (dimension mismatch, d = 0, ...).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {what} is {value}, limit is {limit}")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("lattice too small: {0}")]
    LatticeTooSmall(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
