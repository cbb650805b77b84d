//! Cross-checks between the PDE stepper on spatially constant data and the
//! homogeneous-ODE reference integrator.

use angio_core::stepper::{step, StepConfig};
use angio_core::{Field, Grid, Params, State};
use angio_harness::oracle::{ode_oracle, OdeState};

fn constant_state(grid: &Grid, p: f64, c: f64, w: f64) -> State {
    State::new(grid, Field::constant(grid, p), Field::constant(grid, c), Field::constant(grid, w)).unwrap()
}

fn run_constant(dt: f64, horizon: f64) -> (f64, f64, f64) {
    let grid = Grid::new_1d(1.0, 16).unwrap();
    let params = Params::default();
    let mut s = constant_state(&grid, 0.5, 1.0, 0.8);
    let cfg = StepConfig { dt, ..StepConfig::default() };
    let n = (horizon / dt).round() as usize;
    for _ in 0..n {
        let (out, report) = step(&s, &params, &grid, &cfg).unwrap();
        assert_eq!(report.negative_clips, 0);
        s = out;
    }
    (s.p.data()[0], s.c.data()[0], s.w.data()[0])
}

#[test]
fn splitting_converges_to_the_ode_at_first_order() {
    // gap to the RK4 reference at T = 1 under dt halving
    let params = Params::default();
    let reference = *ode_oracle(&params, OdeState::new(0.5, 1.0, 0.8), 1.0, 1e-5).unwrap().last().unwrap();

    let mut errs = Vec::new();
    for &dt in &[4e-3, 2e-3, 1e-3] {
        let (p, c, w) = run_constant(dt, 1.0);
        let err = (p - reference.p)
            .abs()
            .max((c - reference.c).abs())
            .max((w - reference.w).abs());
        errs.push(err);
    }
    let o1 = (errs[0] / errs[1]).log2();
    let o2 = (errs[1] / errs[2]).log2();
    let fitted = 0.5 * (o1 + o2);
    assert!(fitted >= 0.9, "temporal order {fitted} (halvings {o1}, {o2})");
}

#[test]
fn splitting_tracks_the_ode_trajectory() {
    let params = Params::default();
    let reference = *ode_oracle(&params, OdeState::new(0.5, 1.0, 0.8), 5.0, 1e-4).unwrap().last().unwrap();
    let (p, c, w) = run_constant(1e-3, 5.0);
    assert!((p - reference.p).abs() <= 1e-4 * reference.p.abs().max(1.0));
    assert!((c - reference.c).abs() <= 1e-4 * reference.c.abs().max(1.0));
    assert!((w - reference.w).abs() <= 1e-4 * reference.w.abs().max(1.0));
}
