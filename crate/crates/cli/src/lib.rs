//! File formats, figure sweeps and verification suites around
//! [`misclass_core`].

pub mod io;
pub mod sweep;
pub mod table;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: u64, column: usize, message: String },
    #[error(transparent)]
    Model(#[from] misclass_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 for bad input, 2 for a failed check.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }

    /// Output closed early by the reader, as with `| head`.
    pub fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            CliError::Io { source, .. } => Some(source.kind()),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e.kind()),
                _ => None,
            },
            CliError::Json(e) => e.io_error_kind(),
            _ => None,
        };
        kind == Some(std::io::ErrorKind::BrokenPipe)
    }

    pub(crate) fn parse(line: u64, column: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, column, message: message.into() }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
