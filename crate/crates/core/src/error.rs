use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants line up with the CLI exit-code taxonomy: input problems,
/// capacity limits, and integrity failures (a construction step that the
/// underlying lemmas guarantee can never fail, failing anyway).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("capacity exceeded: {what} requires {required}, limit is {limit}")]
    Capacity {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("integrity failure: {0}")]
    Integrity(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub fn capacity(what: impl Into<String>, required: u128, limit: u128) -> Self {
        Error::Capacity {
            what: what.into(),
            required,
            limit,
        }
    }

    /// Exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Parse { .. } => 2,
            Error::Capacity { .. } => 3,
            Error::Integrity(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
