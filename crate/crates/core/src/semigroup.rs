//! 1D spectral engine for the Neumann heat semigroup on an interval.
//!
//! Cell-centered samples of cos(k pi x / L) are exactly orthogonal under the
//! plain midpoint pairing, so analysis/synthesis between grid vectors and
//! cosine coefficients is exact (to rounding) for any band-limited input.
//! Applying the semigroup is then a diagonal scaling of coefficients by
//! exp(-(k pi / L)^2 tau).

use crate::error::SimError;
use crate::field::Field;
use crate::grid::Grid;
use crate::params::Params;
use std::f64::consts::PI;

/// First nonzero Neumann eigenvalue of -lap on (0, L): (pi / L)^2.
pub fn lambda1(length: f64) -> f64 {
    (PI / length).powi(2)
}

/// Coefficients a_0..a_K against cos(k pi x / L).
#[derive(Debug, Clone, PartialEq)]
pub struct CosineExpansion {
    pub length: f64,
    pub coeffs: Vec<f64>,
}

impl CosineExpansion {
    pub fn modes(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }
}

fn require_1d(grid: &Grid) -> Result<(), SimError> {
    if grid.dim() != 1 {
        return Err(SimError::Input("spectral semigroup operations need a 1D grid".to_string()));
    }
    Ok(())
}

/// Discrete cosine analysis at cell centers, full band (K = cells - 1).
pub fn to_expansion(field: &Field, grid: &Grid) -> Result<CosineExpansion, SimError> {
    require_1d(grid)?;
    if !field.matches(grid) {
        return Err(SimError::Shape { expected: grid.n_cells(), got: field.data().len(), what: "field" });
    }
    let n = grid.nx();
    let mut coeffs = vec![0.0; n];
    for (k, a) in coeffs.iter_mut().enumerate() {
        let mut s = 0.0;
        for (i, &v) in field.data().iter().enumerate() {
            s += v * (k as f64 * PI * (i as f64 + 0.5) / n as f64).cos();
        }
        *a = if k == 0 { s / n as f64 } else { 2.0 * s / n as f64 };
    }
    Ok(CosineExpansion { length: grid.lx(), coeffs })
}

/// Synthesis back to cell centers.
pub fn from_expansion(exp: &CosineExpansion, grid: &Grid) -> Result<Field, SimError> {
    require_1d(grid)?;
    let n = grid.nx();
    let mut data = vec![0.0; n];
    for (i, v) in data.iter_mut().enumerate() {
        let mut s = 0.0;
        for (k, &a) in exp.coeffs.iter().enumerate() {
            s += a * (k as f64 * PI * (i as f64 + 0.5) / n as f64).cos();
        }
        *v = s;
    }
    Field::from_vec(grid, data)
}

/// Sample the x-derivative of the expansion at cell centers.
pub fn gradient_from_expansion(exp: &CosineExpansion, grid: &Grid) -> Result<Field, SimError> {
    require_1d(grid)?;
    let n = grid.nx();
    let mut data = vec![0.0; n];
    for (i, v) in data.iter_mut().enumerate() {
        let x = grid.x_center(i);
        let mut s = 0.0;
        for (k, &a) in exp.coeffs.iter().enumerate().skip(1) {
            let kk = k as f64 * PI / exp.length;
            s -= a * kk * (kk * x).sin();
        }
        *v = s;
    }
    Field::from_vec(grid, data)
}

/// Apply exp(tau lap): scale coefficient k by exp(-(k pi / L)^2 tau).
/// a_0 is untouched, so the mean is conserved for every tau.
pub fn heat_apply(exp: &CosineExpansion, tau: f64) -> CosineExpansion {
    let mut out = exp.clone();
    for (k, a) in out.coeffs.iter_mut().enumerate().skip(1) {
        let lam = (k as f64 * PI / exp.length).powi(2);
        *a *= (-lam * tau).exp();
    }
    out
}

/// L^p norm by midpoint quadrature; p = infinity gives the max norm.
pub fn lp_norm(field: &Field, grid: &Grid, p: f64) -> f64 {
    if p.is_infinite() {
        field.data().iter().map(|v| v.abs()).fold(0.0, f64::max)
    } else {
        let s: f64 = field.data().iter().map(|v| v.abs().powf(p)).sum();
        (s * grid.cell_volume()).powf(1.0 / p)
    }
}

/// One sampled tau in the decay-estimate report.
#[derive(Debug, Clone, Copy)]
pub struct DecayRow {
    pub tau: f64,
    /// ||S(tau) phi||_p / [(1 + tau^{-sigma}) e^{-lambda1 tau} ||phi||_q]
    pub norm_ratio: f64,
    /// the gradient analogue with its own sigma
    pub grad_ratio: f64,
    pub l2: f64,
}

/// Empirical constants for the smoothing estimates of the semigroup.
#[derive(Debug, Clone)]
pub struct DecayReport {
    /// sup over sampled tau of the norm ratio
    pub k1_empirical: f64,
    /// sup over sampled tau of the gradient ratio
    pub k2_empirical: f64,
    pub l2_monotone: bool,
    pub rows: Vec<DecayRow>,
}

impl DecayReport {
    pub fn passes(&self) -> bool {
        self.k1_empirical.is_finite() && self.k2_empirical.is_finite() && self.l2_monotone
    }
}

/// Measure the L^q -> L^p smoothing ratios of the semigroup on a mean-zero
/// field over the sampled taus (N = 1 exponents). The report carries the
/// empirical constants; boundedness across the samples is the check.
pub fn verify_decay_estimates(
    phi: &Field,
    grid: &Grid,
    taus: &[f64],
    p_exp: f64,
    q_exp: f64,
) -> Result<DecayReport, SimError> {
    require_1d(grid)?;
    let scale = phi.data().iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    if phi.integral(grid).abs() > 1e-10 * scale {
        return Err(SimError::Input(format!(
            "decay estimates need a mean-zero field, integral = {:e}",
            phi.integral(grid)
        )));
    }
    if !(q_exp <= p_exp) {
        return Err(SimError::Input("decay estimates need q <= p".to_string()));
    }
    let lam1 = lambda1(grid.lx());
    let norm_q = lp_norm(phi, grid, q_exp);
    let sigma_norm = 0.5 * (1.0 / q_exp - 1.0 / p_exp);
    let sigma_grad = 0.5 + sigma_norm;

    let mut exp = to_expansion(phi, grid)?;
    // the estimate lives on the mean-zero subspace; drop the sub-tolerance
    // mean so rounding leakage into a_0 (which the semigroup never decays)
    // cannot swamp the ratios at large tau
    exp.coeffs[0] = 0.0;
    let mut rows = Vec::with_capacity(taus.len());
    let mut prev_l2 = f64::INFINITY;
    let mut prev_tau = 0.0;
    let mut l2_monotone = true;
    for &tau in taus {
        if !(tau > prev_tau) {
            return Err(SimError::Input(format!("taus must be positive and increasing, got {tau}")));
        }
        prev_tau = tau;
        let evolved = heat_apply(&exp, tau);
        let u = from_expansion(&evolved, grid)?;
        let gu = gradient_from_expansion(&evolved, grid)?;
        let envelope = |sigma: f64| (1.0 + tau.powf(-sigma)) * (-lam1 * tau).exp() * norm_q;
        let row = DecayRow {
            tau,
            norm_ratio: lp_norm(&u, grid, p_exp) / envelope(sigma_norm),
            grad_ratio: lp_norm(&gu, grid, p_exp) / envelope(sigma_grad),
            l2: lp_norm(&u, grid, 2.0),
        };
        if row.l2 > prev_l2 * (1.0 + 1e-12) {
            l2_monotone = false;
        }
        prev_l2 = row.l2;
        rows.push(row);
    }
    Ok(DecayReport {
        k1_empirical: rows.iter().map(|r| r.norm_ratio).fold(0.0, f64::max),
        k2_empirical: rows.iter().map(|r| r.grad_ratio).fold(0.0, f64::max),
        l2_monotone,
        rows,
    })
}

/// Reconstruct c(t) from the representation
///   c(t) = e^{-t} S(t) c0 + Int_0^t e^{-(t-s)} S(t-s) f(s) ds,  f = -mu p c,
/// with S the heat semigroup applied spectrally and the s-integral by the
/// trapezoidal rule over uniformly spaced (t, p, c) snapshots covering [0, t].
pub fn variation_of_constants_c(
    snapshots: &[(f64, Field, Field)],
    c0: &Field,
    t: f64,
    params: &Params,
    grid: &Grid,
) -> Result<Field, SimError> {
    require_1d(grid)?;
    if snapshots.len() < 2 {
        return Err(SimError::Input("variation-of-constants needs at least 2 snapshots".to_string()));
    }
    let ds = snapshots[1].0 - snapshots[0].0;
    for w in snapshots.windows(2) {
        if ((w[1].0 - w[0].0) - ds).abs() > 1e-9 * ds.max(1e-12) {
            return Err(SimError::Input("snapshots are not uniformly spaced".to_string()));
        }
    }
    let tol = 1e-9 * ds.max(1e-12);
    if snapshots[0].0.abs() > tol || snapshots.last().unwrap().0 < t - tol {
        return Err(SimError::Input(format!(
            "snapshots must cover [0, {t}], got [{}, {}]",
            snapshots[0].0,
            snapshots.last().unwrap().0
        )));
    }

    // homogeneous part
    let mut acc = heat_apply(&to_expansion(c0, grid)?, t);
    for a in acc.coeffs.iter_mut() {
        *a *= (-t).exp();
    }

    // Duhamel part: trapezoid over the snapshots inside [0, t]
    let n_used = snapshots.iter().take_while(|(s, _, _)| *s <= t + tol).count();
    for (j, (s, p, c)) in snapshots.iter().take(n_used).enumerate() {
        let weight = if j == 0 || j == n_used - 1 { 0.5 * ds } else { ds };
        let mut f = p.clone();
        for (k, v) in f.data_mut().iter_mut().enumerate() {
            *v *= -params.mu * c.data()[k];
        }
        let evolved = heat_apply(&to_expansion(&f, grid)?, t - s);
        let damp = (-(t - s)).exp() * weight;
        for (k, a) in evolved.coeffs.iter().enumerate() {
            acc.coeffs[k] += damp * a;
        }
    }

    from_expansion(&acc, grid)
}
