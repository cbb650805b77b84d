//! Error type shared by the solver and diagnostics.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    /// A field's length does not match the grid it is used with.
    Shape { expected: usize, got: usize, what: &'static str },
    /// A parameter or configuration value is out of its admissible range.
    Invalid(String),
    /// The implicit diffusion solve failed (singular or non-finite pivot).
    Solver(String),
    /// A non-finite value appeared in the named field at the given time.
    Diverged { field: &'static str, t: f64 },
    /// An operation received input it cannot work with (too few samples, ...).
    Input(String),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Shape { expected, got, what } => {
                write!(f, "shape mismatch for {what}: expected {expected} values, got {got}")
            }
            SimError::Invalid(msg) => write!(f, "invalid value: {msg}"),
            SimError::Solver(msg) => write!(f, "linear solver failure: {msg}"),
            SimError::Diverged { field, t } => {
                write!(f, "non-finite value in field `{field}` at t = {t}")
            }
            SimError::Input(msg) => write!(f, "bad input: {msg}"),
        }
    }
}

impl std::error::Error for SimError {}
