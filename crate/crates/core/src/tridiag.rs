//! Thomas algorithm and the theta-scheme diffusion step it backs.
//!
//! The implicit operator for u_t = lap u - decay * u is
//!   (1 + theta dt decay) I - theta dt lap_h,
//! tridiagonal along each axis. 1D solves it directly; 2D factors it into
//! one tridiagonal sweep per axis with the decay split evenly between the
//! sweeps, which is consistent to the same order as the splitting itself.

use crate::error::SimError;
use crate::field::Field;
use crate::grid::Grid;
use crate::ops::laplacian_neumann;

/// Solve a tridiagonal system in place. `sub[0]` and `sup[n-1]` are unused.
/// Coefficient slices are scratch-free inputs; `rhs` is overwritten with the
/// solution.
pub fn thomas_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) -> Result<(), SimError> {
    let n = rhs.len();
    debug_assert!(sub.len() == n && diag.len() == n && sup.len() == n);
    let mut c_prime = vec![0.0; n];

    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(SimError::Solver(format!("zero or non-finite pivot at row 0 ({pivot})")));
    }
    c_prime[0] = sup[0] / pivot;
    rhs[0] /= pivot;

    for i in 1..n {
        pivot = diag[i] - sub[i] * c_prime[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(SimError::Solver(format!("zero or non-finite pivot at row {i} ({pivot})")));
        }
        if i < n - 1 {
            c_prime[i] = sup[i] / pivot;
        }
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / pivot;
    }

    for i in (0..n - 1).rev() {
        rhs[i] -= c_prime[i] * rhs[i + 1];
    }
    Ok(())
}

/// Coefficients of (1 + a*decay) I - a * lap_1d on n cells with spacing h,
/// reflecting ghosts. a = theta * dt.
fn axis_coefficients(n: usize, h: f64, a: f64, decay: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let r = a / (h * h);
    let mut sub = vec![-r; n];
    let mut sup = vec![-r; n];
    let mut diag = vec![1.0 + a * decay + 2.0 * r; n];
    // boundary rows lose one neighbor; the reflected ghost cancels it
    diag[0] = 1.0 + a * decay + r;
    diag[n - 1] = 1.0 + a * decay + r;
    sub[0] = 0.0;
    sup[n - 1] = 0.0;
    (sub, diag, sup)
}

/// One theta-scheme step of u_t = lap u - decay * u over dt.
///
/// theta = 1 is backward Euler, theta = 0.5 Crank-Nicolson. The explicit
/// (1 - theta) part uses the same discrete Laplacian, so theta = 1 skips it.
pub fn theta_diffusion_step(
    u: &Field,
    grid: &Grid,
    dt: f64,
    theta: f64,
    decay: f64,
) -> Result<Field, SimError> {
    let mut rhs = if theta < 1.0 {
        let lap = laplacian_neumann(u, grid);
        let b = 1.0 - theta;
        let mut out = u.clone();
        for (k, v) in out.data_mut().iter_mut().enumerate() {
            *v += b * dt * (lap.data()[k] - decay * u.data()[k]);
        }
        out
    } else {
        u.clone()
    };

    let a = theta * dt;
    let (nx, ny) = (grid.nx(), grid.ny());

    if grid.dim() == 1 {
        let (sub, diag, sup) = axis_coefficients(nx, grid.dx(), a, decay);
        thomas_solve(&sub, &diag, &sup, rhs.data_mut())?;
        return Ok(rhs);
    }

    // 2D: alternating-direction sweeps, half the decay in each
    let (sub_x, diag_x, sup_x) = axis_coefficients(nx, grid.dx(), a, 0.5 * decay);
    let mut row = vec![0.0; nx];
    for j in 0..ny {
        for (i, v) in row.iter_mut().enumerate() {
            *v = rhs.at(i, j);
        }
        thomas_solve(&sub_x, &diag_x, &sup_x, &mut row)?;
        for (i, v) in row.iter().enumerate() {
            *rhs.at_mut(i, j) = *v;
        }
    }

    let (sub_y, diag_y, sup_y) = axis_coefficients(ny, grid.dy(), a, 0.5 * decay);
    let mut col = vec![0.0; ny];
    for i in 0..nx {
        for (j, v) in col.iter_mut().enumerate() {
            *v = rhs.at(i, j);
        }
        thomas_solve(&sub_y, &diag_y, &sup_y, &mut col)?;
        for (j, v) in col.iter().enumerate() {
            *rhs.at_mut(i, j) = *v;
        }
    }
    Ok(rhs)
}
