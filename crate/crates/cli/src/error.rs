use std::io;
use std::path::PathBuf;

use qtm_core::QtmError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("transitions[{index}]: {source}")]
    Transition { index: usize, source: QtmError },

    #[error(transparent)]
    Core(#[from] QtmError),

    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}
