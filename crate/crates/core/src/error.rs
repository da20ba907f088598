use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller violated a precondition (mismatched fields, wrong lengths, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// Mathematically undefined request, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),
    /// Instance exceeds what the selected engine will attempt.
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
