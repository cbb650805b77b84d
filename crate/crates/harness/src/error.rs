//! Harness-side error type: configuration problems, I/O, and anything the
//! solver reports, wrapped with scenario context where useful.

use angio_core::SimError;
use std::fmt;

#[derive(Debug)]
pub enum HarnessError {
    /// A malformed config line.
    Config { line: usize, msg: String },
    /// Required keys absent from the config.
    MissingKeys(Vec<&'static str>),
    /// A scenario precondition failed (bad initial data, missing family, ...).
    Scenario(String),
    Sim(SimError),
    Io(std::io::Error),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Config { line, msg } => write!(f, "config error at line {line}: {msg}"),
            HarnessError::MissingKeys(keys) => {
                write!(f, "config is missing required keys: {}", keys.join(", "))
            }
            HarnessError::Scenario(msg) => write!(f, "scenario error: {msg}"),
            HarnessError::Sim(e) => write!(f, "solver error: {e}"),
            HarnessError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<SimError> for HarnessError {
    fn from(e: SimError) -> Self {
        HarnessError::Sim(e)
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e)
    }
}
