//! Experiment runner behind the `secwipt` binary.
//!
//! A scenario is a TOML file ([`ScenarioConfig`]); [`run`] turns it into a
//! [`ResultTable`] that is written as CSV with a `#` metadata header.

mod config;
mod run;
mod table;

use std::fmt;
use std::path::Path;

pub use config::{
    Experiment, Geometry, Params, RelaySection, ScenarioConfig, SweepSection, WpcnSection, ChannelKind,
    MisoSection, Violation,
};
pub use run::{run, run_with_threads};
pub use table::{Cell, ResultTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed config file.
    Parse(String),
    /// Config parsed but breaks a precondition.
    Invalid(Vec<Violation>),
    /// A numeric operation failed while running.
    Numeric(crate::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Invalid(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "config error: {msg}"),
            CliError::Invalid(violations) => {
                write!(f, "config error: {} violation(s)", violations.len())?;
                for v in violations {
                    write!(f, "\n  {v}")?;
                }
                Ok(())
            }
            CliError::Numeric(e) => write!(f, "numeric error in {}: {e}", e.operation()),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Reads and parses a scenario file. Does not validate it.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    ScenarioConfig::from_toml(&text)
}
