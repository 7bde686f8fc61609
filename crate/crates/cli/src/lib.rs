//! Command-line front end for `twistalg`: reads fixture documents, runs one
//! operation and writes either a document or a report.
//!
//! Exit status is 0 when the operation succeeds or the checked property holds,
//! 1 when a check fails (the report carries the witness) and 2 on input errors.

pub mod commands;
pub mod format;
pub mod report;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{run, Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: format::ParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Algebra(#[from] twistalg::Error),
    #[error("{0}")]
    Usage(String),
}
