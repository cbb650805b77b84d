//! Finite-volume simulator and verification diagnostics for a
//! chemotaxis-haptotaxis model of capillary sprout growth:
//!
//!   p_t = lap p - div( p ( alpha/(1+c) grad c + rho grad w ) ) + lambda p (1-p)
//!   c_t = lap c - c - mu p c
//!   w_t = gamma p (1 - w)
//!
//! on an interval or rectangle with no-flux boundary conditions. The solver
//! is a positivity-preserving upwind/IMEX scheme; the diagnostics expose the
//! quantities that drive the convergence analysis of the system (Lyapunov
//! functional, a-priori bounds, spectral semigroup estimates) as computable
//! monitors.

// validation uses `!(x > 0.0)` on purpose: it rejects NaN, `x <= 0.0` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod ops;
pub mod params;
pub mod semigroup;
pub mod state;
pub mod stepper;
pub mod tridiag;

pub use error::SimError;
pub use field::{FaceField, Field};
pub use grid::Grid;
pub use params::Params;
pub use state::{steady_state, validate_initial_data, InitialReport, State};
