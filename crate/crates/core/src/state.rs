//! Simulation state and validation of the hypotheses on initial data.

use crate::error::SimError;
use crate::field::Field;
use crate::grid::Grid;
use crate::params::Params;

/// The three cell-centered fields plus the simulation time.
///
/// * `p` — migrating cell density
/// * `c` — diffusible signal concentration
/// * `w` — non-diffusible bound substrate
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub p: Field,
    pub c: Field,
    pub w: Field,
    pub t: f64,
}

impl State {
    pub fn new(grid: &Grid, p: Field, c: Field, w: Field) -> Result<Self, SimError> {
        for (f, what) in [(&p, "field p"), (&c, "field c"), (&w, "field w")] {
            if !f.matches(grid) {
                return Err(SimError::Shape { expected: grid.n_cells(), got: f.data().len(), what });
            }
        }
        Ok(State { p, c, w, t: 0.0 })
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.c.is_finite() && self.w.is_finite()
    }
}

/// The spatially homogeneous equilibrium (p, c, w) = (1, 0, 1) at t = 0.
pub fn steady_state(grid: &Grid) -> State {
    State {
        p: Field::constant(grid, 1.0),
        c: Field::constant(grid, 0.0),
        w: Field::constant(grid, 1.0),
        t: 0.0,
    }
}

/// Outcome of checking the initial data against the solvability and
/// convergence hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialReport {
    /// All three fields componentwise nonnegative.
    pub nonneg_ok: bool,
    /// p0 is not identically zero.
    pub p0_nonzero_ok: bool,
    /// min w0 > 1 - 1/rho, the smallness condition on the haptotactic pull.
    pub haptotaxis_smallness_ok: bool,
    pub min_w0: f64,
    pub details: Vec<String>,
}

impl InitialReport {
    pub fn all_ok(&self) -> bool {
        self.nonneg_ok && self.p0_nonzero_ok && self.haptotaxis_smallness_ok
    }
}

/// Pure check of the initial data; never mutates the state.
pub fn validate_initial_data(state: &State, params: &Params, grid: &Grid) -> Result<InitialReport, SimError> {
    for (f, what) in [(&state.p, "field p"), (&state.c, "field c"), (&state.w, "field w")] {
        if !f.matches(grid) {
            return Err(SimError::Shape { expected: grid.n_cells(), got: f.data().len(), what });
        }
    }

    let mut details = Vec::new();

    let mut nonneg_ok = true;
    for (f, name) in [(&state.p, "p0"), (&state.c, "c0"), (&state.w, "w0")] {
        let m = f.min();
        if m < 0.0 {
            nonneg_ok = false;
            let count = f.data().iter().filter(|v| **v < 0.0).count();
            details.push(format!("{name} is negative at {count} cells (min = {m:e})"));
        }
    }

    let p0_nonzero_ok = state.p.max() > 0.0;
    if !p0_nonzero_ok {
        details.push("p0 is identically zero".to_string());
    }

    let min_w0 = state.w.min();
    let threshold = 1.0 - 1.0 / params.rho;
    let haptotaxis_smallness_ok = min_w0 > threshold;
    if !haptotaxis_smallness_ok {
        details.push(format!(
            "min w0 = {min_w0} does not exceed 1 - 1/rho = {threshold}; decay-rate guarantees do not apply"
        ));
    }

    Ok(InitialReport { nonneg_ok, p0_nonzero_ok, haptotaxis_smallness_ok, min_w0, details })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new_1d(1.0, 8).unwrap()
    }

    #[test]
    fn equilibrium_data_satisfies_every_hypothesis() {
        let g = grid();
        let params = Params::new(0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        let s = State::new(&g, Field::constant(&g, 1.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let r = validate_initial_data(&s, &params, &g).unwrap();
        assert!(r.nonneg_ok && r.p0_nonzero_ok && r.haptotaxis_smallness_ok);
        assert!(r.details.is_empty());
        assert_eq!(r.min_w0, 1.0);
    }

    #[test]
    fn zero_p0_is_flagged() {
        let g = grid();
        let params = Params::default();
        let s = State::new(&g, Field::constant(&g, 0.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let r = validate_initial_data(&s, &params, &g).unwrap();
        assert!(!r.p0_nonzero_ok);
        assert!(r.nonneg_ok);
    }

    #[test]
    fn haptotaxis_smallness_uses_strict_inequality() {
        // 0.4 < 1 - 1/2 = 0.5, so the hypothesis fails for rho = 2.
        let g = grid();
        let params = Params::new(0.5, 2.0, 1.0, 1.0, 1.0).unwrap();
        let s = State::new(&g, Field::constant(&g, 1.0), Field::constant(&g, 0.0), Field::constant(&g, 0.4)).unwrap();
        let r = validate_initial_data(&s, &params, &g).unwrap();
        assert!(!r.haptotaxis_smallness_ok);
        assert!((r.min_w0 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn validation_does_not_mutate() {
        let g = grid();
        let params = Params::default();
        let s = State::new(&g, Field::constant(&g, 1.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let before = s.clone();
        let _ = validate_initial_data(&s, &params, &g).unwrap();
        let _ = validate_initial_data(&s, &params, &g).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let g = grid();
        let g_big = Grid::new_1d(1.0, 16).unwrap();
        let s = steady_state(&g_big);
        assert!(validate_initial_data(&s, &Params::default(), &g).is_err());
        assert!(State::new(&g, Field::constant(&g_big, 1.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).is_err());
    }

    #[test]
    fn steady_state_is_one_zero_one() {
        let g = Grid::new_2d(2.0, 1.0, 6, 4).unwrap();
        let s = steady_state(&g);
        assert!(s.p.data().iter().all(|&v| v == 1.0));
        assert!(s.c.data().iter().all(|&v| v == 0.0));
        assert!(s.w.data().iter().all(|&v| v == 1.0));
        assert_eq!(s.t, 0.0);
        // mass of p equals |Omega|
        assert!((s.p.integral(&g) - g.measure()).abs() < 1e-12);
    }
}
