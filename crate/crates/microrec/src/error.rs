//! Error type shared by all modules.

use crate::dataset::UserId;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed line in one of the input files (strict mode only).
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: u64,
        msg: String,
    },

    /// A key=value configuration problem.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A domain precondition violation (negative weight, out-of-range grade
    /// input, non-positive saturation parameter, positive time offset, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation was asked about a user the corpus does not contain.
    #[error("unknown user {0}")]
    UnknownUser(UserId),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            msg: msg.into(),
        }
    }
}
