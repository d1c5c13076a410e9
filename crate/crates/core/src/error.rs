use std::io;

use thiserror::Error;

/// Errors produced by the toolkit.
///
/// The variants map onto the CLI exit statuses: validation and stream-length
/// problems exit with 1, corruption exits with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("corrupt stream{}: {reason}", match .record { Some(i) => format!(" (record {i})"), None => String::new() })]
    Corrupt {
        record: Option<usize>,
        reason: String,
    },

    #[error("stream length mismatch: declared {declared} symbols, input has {actual}")]
    StreamLength { declared: u64, actual: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn corrupt(reason: impl Into<String>) -> Self {
        Error::Corrupt {
            record: None,
            reason: reason.into(),
        }
    }

    /// Attaches a record index to a corruption error that does not have one yet.
    pub(crate) fn in_record(self, index: usize) -> Self {
        match self {
            Error::Corrupt {
                record: None,
                reason,
            } => Error::Corrupt {
                record: Some(index),
                reason,
            },
            Error::Io(e) if e.kind() == io::ErrorKind::UnexpectedEof => Error::Corrupt {
                record: Some(index),
                reason: "truncated record".into(),
            },
            other => other,
        }
    }

    /// Process exit status for this error: 1 for validation, 2 for corruption.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Corrupt { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
