//! Refinement studies for the spatial operators: the semidiscrete residual
//! against smooth closed-form fields must shrink at second order for the
//! diffusion stencil and at first order for the upwind transport.

use angio_core::ops;
use angio_core::{Field, Grid, Params, State};
use std::f64::consts::PI;

const P_AMP: f64 = 0.5;
const C_BASE: f64 = 0.4;
const C_AMP: f64 = 0.3;
const W_AMP: f64 = 0.25;

fn fields(grid: &Grid) -> State {
    let p = Field::from_fn(grid, |x, _| 1.0 + P_AMP * (PI * x).cos());
    let c = Field::from_fn(grid, |x, _| C_BASE + C_AMP * (PI * x).cos());
    let w = Field::from_fn(grid, |x, _| 1.0 + W_AMP * (PI * x).cos());
    State::new(grid, p, c, w).unwrap()
}

fn c_exact(x: f64) -> f64 {
    C_BASE + C_AMP * (PI * x).cos()
}

/// d(p v)/dx for v = alpha/(1+c) c' + rho w', all fields cosine bumps.
fn div_pv_exact(x: f64, params: &Params) -> f64 {
    let s = (PI * x).sin();
    let cos = (PI * x).cos();
    let g = params.alpha * C_AMP / (1.0 + c_exact(x)) + params.rho * W_AMP;
    let g_prime = params.alpha * C_AMP * C_AMP * PI * s / (1.0 + c_exact(x)).powi(2);
    let v = -PI * s * g;
    let v_prime = -PI * PI * cos * g - PI * s * g_prime;
    let p = 1.0 + P_AMP * cos;
    let p_prime = -P_AMP * PI * s;
    p_prime * v + p * v_prime
}

fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn diffusion_residual_second_order() {
    let mut errs = Vec::new();
    for cells in [32usize, 64, 128] {
        let grid = Grid::new_1d(1.0, cells).unwrap();
        let state = fields(&grid);
        let lap = ops::laplacian_neumann(&state.p, &grid);
        let mut e = 0.0f64;
        for i in 0..cells {
            let x = grid.x_center(i);
            let exact = -P_AMP * PI * PI * (PI * x).cos();
            e = e.max((lap.at(i, 0) - exact).abs());
        }
        errs.push(e);
    }
    for o in orders(&errs) {
        assert!(o >= 1.9, "diffusion order {o}, errors {errs:?}");
    }
}

#[test]
fn upwind_transport_residual_first_order() {
    let params = Params::default();
    let mut errs = Vec::new();
    for cells in [32usize, 64, 128] {
        let grid = Grid::new_1d(1.0, cells).unwrap();
        let state = fields(&grid);
        let vel = ops::chemo_hapto_velocity(&state, &params, &grid);
        let div = ops::divergence(&ops::advective_flux_upwind(&state.p, &vel, &grid), &grid);
        let mut e = 0.0f64;
        for i in 0..cells {
            e = e.max((div.at(i, 0) - div_pv_exact(grid.x_center(i), &params)).abs());
        }
        errs.push(e);
    }
    for o in orders(&errs) {
        assert!(o >= 0.9, "transport order {o}, errors {errs:?}");
    }
}

#[test]
fn equilibrium_has_zero_semidiscrete_residual() {
    for grid in [Grid::new_1d(1.0, 64).unwrap(), Grid::new_2d(1.0, 1.0, 12, 12).unwrap()] {
        let s = angio_core::steady_state(&grid);
        let rhs = ops::assemble_rhs(&s, &Params::default(), &grid);
        for f in [&rhs.dp, &rhs.dc, &rhs.dw] {
            for &v in f.data() {
                assert!(v.abs() <= 1e-12);
            }
        }
    }
}
