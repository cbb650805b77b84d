//! Scenario definitions, config parsing, the homogeneous-ODE oracle, CSV
//! emission and the acceptance suite for the angiogenesis solver.

// validation uses `!(x > 0.0)` on purpose: it rejects NaN, `x <= 0.0` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod oracle;
pub mod output;
pub mod scenario;
pub mod suite;

pub use config::{parse_config, Config};
pub use error::HarnessError;
