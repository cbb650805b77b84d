//! Semidiscrete spatial operators: Neumann Laplacian, face gradients, and
//! positivity-preserving upwind fluxes for the chemotactic/haptotactic
//! advection.
//!
//! Everything is built from face values with boundary faces pinned at zero,
//! so the discrete divergence theorem holds exactly: the integral of any
//! divergence telescopes to the boundary fluxes, which are zero. This is the
//! discrete form of the no-flux conditions on both the diffusive and the
//! advective parts of the cell flux.

use crate::field::{Field, FaceField};
use crate::grid::Grid;
use crate::params::Params;
use crate::state::State;

/// Right-hand sides of the three evolution equations.
#[derive(Debug, Clone)]
pub struct Rhs {
    pub dp: Field,
    pub dc: Field,
    pub dw: Field,
}

/// Face-centered gradient of a cell field. Interior face value is the
/// difference of the adjacent cells over the spacing; boundary faces are 0
/// (reflecting ghost, i.e. homogeneous Neumann).
pub fn gradient_faces(field: &Field, grid: &Grid) -> FaceField {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut g = FaceField::zeros(grid);
    let inv_dx = 1.0 / grid.dx();
    for j in 0..ny {
        for ix in 1..nx {
            *g.xf_mut(ix, j) = (field.at(ix, j) - field.at(ix - 1, j)) * inv_dx;
        }
    }
    if grid.dim() == 2 {
        let inv_dy = 1.0 / grid.dy();
        for jy in 1..ny {
            for i in 0..nx {
                *g.yf_mut(i, jy) = (field.at(i, jy) - field.at(i, jy - 1)) * inv_dy;
            }
        }
    }
    g
}

/// Divergence of a face flux: flux differences over the cell extent.
pub fn divergence(flux: &FaceField, grid: &Grid) -> Field {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = Field::zeros(grid);
    let inv_dx = 1.0 / grid.dx();
    let inv_dy = 1.0 / grid.dy();
    for j in 0..ny {
        for i in 0..nx {
            let mut d = (flux.xf(i + 1, j) - flux.xf(i, j)) * inv_dx;
            if grid.dim() == 2 {
                d += (flux.yf(i, j + 1) - flux.yf(i, j)) * inv_dy;
            }
            *out.at_mut(i, j) = d;
        }
    }
    out
}

/// Second-order Laplacian with reflecting ghost cells: the divergence of the
/// face gradient. 3-point stencil in 1D, 5-point in 2D.
pub fn laplacian_neumann(field: &Field, grid: &Grid) -> Field {
    divergence(&gradient_faces(field, grid), grid)
}

/// Upwind advective flux through every face: face velocity times the value of
/// `p` in the upstream cell (left cell for velocity >= 0). Boundary faces
/// stay 0.
pub fn advective_flux_upwind(p: &Field, velocity: &FaceField, grid: &Grid) -> FaceField {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut flux = FaceField::zeros(grid);
    for j in 0..ny {
        for ix in 1..nx {
            let v = velocity.xf(ix, j);
            let up = if v >= 0.0 { p.at(ix - 1, j) } else { p.at(ix, j) };
            *flux.xf_mut(ix, j) = v * up;
        }
    }
    if grid.dim() == 2 {
        for jy in 1..ny {
            for i in 0..nx {
                let v = velocity.yf(i, jy);
                let up = if v >= 0.0 { p.at(i, jy - 1) } else { p.at(i, jy) };
                *flux.yf_mut(i, jy) = v * up;
            }
        }
    }
    flux
}

/// Face velocity of the directed migration, alpha/(1 + c_face) * grad c plus
/// rho * grad w, with c at faces by arithmetic averaging of the adjacent
/// cells. Boundary faces stay 0.
pub fn chemo_hapto_velocity(state: &State, params: &Params, grid: &Grid) -> FaceField {
    let (nx, ny) = (grid.nx(), grid.ny());
    let gc = gradient_faces(&state.c, grid);
    let gw = gradient_faces(&state.w, grid);
    let mut v = FaceField::zeros(grid);
    for j in 0..ny {
        for ix in 1..nx {
            let c_face = 0.5 * (state.c.at(ix - 1, j) + state.c.at(ix, j));
            *v.xf_mut(ix, j) = params.alpha / (1.0 + c_face) * gc.xf(ix, j) + params.rho * gw.xf(ix, j);
        }
    }
    if grid.dim() == 2 {
        for jy in 1..ny {
            for i in 0..nx {
                let c_face = 0.5 * (state.c.at(i, jy - 1) + state.c.at(i, jy));
                *v.yf_mut(i, jy) = params.alpha / (1.0 + c_face) * gc.yf(i, jy) + params.rho * gw.yf(i, jy);
            }
        }
    }
    v
}

/// Full semidiscrete right-hand side:
///   dp = lap p - div(p v) + lambda p (1 - p),   v = alpha/(1+c) grad c + rho grad w
///   dc = lap c - c - mu p c
///   dw = gamma p (1 - w)
pub fn assemble_rhs(state: &State, params: &Params, grid: &Grid) -> Rhs {
    let lap_p = laplacian_neumann(&state.p, grid);
    let lap_c = laplacian_neumann(&state.c, grid);
    let vel = chemo_hapto_velocity(state, params, grid);
    let div_adv = divergence(&advective_flux_upwind(&state.p, &vel, grid), grid);

    let n = grid.n_cells();
    let mut dp = Field::zeros(grid);
    let mut dc = Field::zeros(grid);
    let mut dw = Field::zeros(grid);
    for k in 0..n {
        let p = state.p.data()[k];
        let c = state.c.data()[k];
        let w = state.w.data()[k];
        dp.data_mut()[k] = lap_p.data()[k] - div_adv.data()[k] + params.lambda * p * (1.0 - p);
        dc.data_mut()[k] = lap_c.data()[k] - c - params.mu * p * c;
        dw.data_mut()[k] = params.gamma * p * (1.0 - w);
    }
    Rhs { dp, dc, dw }
}

/// Transport + reaction parts only (the full rhs minus the implicit pieces:
/// diffusion of p and c and the linear decay of c). These are the terms the
/// stepper advances explicitly.
pub(crate) fn explicit_rhs(state: &State, params: &Params, grid: &Grid) -> (Field, Field) {
    let vel = chemo_hapto_velocity(state, params, grid);
    let div_adv = divergence(&advective_flux_upwind(&state.p, &vel, grid), grid);
    let n = grid.n_cells();
    let mut dp = Field::zeros(grid);
    let mut dc = Field::zeros(grid);
    for k in 0..n {
        let p = state.p.data()[k];
        let c = state.c.data()[k];
        dp.data_mut()[k] = -div_adv.data()[k] + params.lambda * p * (1.0 - p);
        dc.data_mut()[k] = -params.mu * p * c;
    }
    (dp, dc)
}
