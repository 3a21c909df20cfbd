//! Crate-wide error type.
//!
//! Errors are split into two classes that the CLI maps onto exit codes:
//! anything caused by bad input data, bad configuration or bad arguments is a
//! *validation* failure (exit 1), while I/O failures and other unexpected
//! conditions are *internal* (exit 2).

use std::path::PathBuf;

use chrono::NaiveDateTime;
use thiserror::Error;

use crate::series::{Indicator, Tech};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed content in an input file, located by line.
    #[error("{path}:{line}: parse error: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    /// Structurally valid content that violates a data contract.
    #[error("{path}:{line}: invalid data: {message}")]
    InvalidRow {
        path: PathBuf,
        line: u64,
        message: String,
    },

    /// A contract violation not tied to a single input line.
    #[error("{0}")]
    Validation(String),

    /// Missing, unknown or unparsable configuration.
    #[error("config: {0}")]
    Config(String),

    /// A missing point with no same-hour-of-week value to borrow from.
    #[error("cannot impute {cell_id} {tech} {indicator} at {timestamp}: no value at the same hour of week")]
    Unimputable {
        cell_id: String,
        tech: Tech,
        indicator: Indicator,
        timestamp: NaiveDateTime,
    },

    /// A history window whose mean is zero carries no usable scale.
    #[error("degenerate row: zero-mean history window")]
    ZeroScale,

    /// The training loss is undefined when the true vector has zero mean.
    #[error("loss undefined: zero-mean target vector")]
    ZeroMeanTarget,

    /// A model file that cannot be loaded (bad magic, version, dimensions,
    /// truncation or non-finite weights).
    #[error("model file {path}: {message}")]
    ModelFile { path: PathBuf, message: String },

    /// Forecast grids that cannot be compared or merged.
    #[error("forecast grids disagree: {0}")]
    GridMismatch(String),

    /// Training could not run or diverged.
    #[error("training: {0}")]
    Train(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Exit status the CLI should report for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
