//! Every analytic quantity the verification harness tracks: variable
//! transforms, norms, the Lyapunov pair (F, G), the kappa selection rule,
//! a-priori bound monitors, the mean-value ODE residual and tail decay fits.
//!
//! All integrals are midpoint quadrature (cell value times cell volume);
//! gradients come from the face stencil with face values squared or paired
//! and then averaged back to cells.

use crate::error::SimError;
use crate::field::Field;
use crate::grid::Grid;
use crate::ops::gradient_faces;
use crate::params::Params;
use crate::state::State;

/// Cells below this floor contribute 0 to p ln p integrands, and |grad p|^2/p
/// is evaluated with p replaced by the floor. Both integrands have finite
/// limits along trajectories approaching the equilibrium; the floor only
/// guards startup transients.
pub const P_FLOOR: f64 = 1e-14;

/// One time-stamped row of every monitored quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagRecord {
    pub t: f64,
    /// integral of p over the domain
    pub mass_p: f64,
    /// mass_p / |Omega|
    pub mean_p: f64,
    pub linf_p_minus_1: f64,
    pub l2_p_minus_1: f64,
    /// extra L^r norms of p - 1 for the configured r list
    pub lr_norms: Vec<(u32, f64)>,
    /// W^{1,2} norm of c: (||c||_2^2 + ||grad c||_2^2)^{1/2}
    pub w12_c: f64,
    pub w12_w_minus_1: f64,
    pub linf_c: f64,
    /// integral of |grad w|^2
    pub grad_w_l2_sq: f64,
    /// Lyapunov functional F at the configured kappa
    pub lyapunov_f: f64,
    /// its dissipation rate G (dF/dt = G along exact solutions)
    pub dissipation_g: f64,
    pub min_p: f64,
    pub max_p: f64,
    pub min_w: f64,
    pub max_w: f64,
}

/// The integrals entering the dissipation inequality and the time-integral
/// bound monitor. Kept per record next to the DiagRecord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationTerms {
    /// integral of |grad p|^2 / p
    pub grad_p_sq_over_p: f64,
    /// integral of p |grad w|^2
    pub p_grad_w_sq: f64,
    /// integral of p |w - 1|
    pub p_abs_w_minus_1: f64,
    /// integral of p |grad c|^2
    pub p_grad_c_sq: f64,
    /// integral of |w - 1| (at t = 0 this is the L1 bound of monitor 4)
    pub abs_w_minus_1: f64,
    /// integral of p (1 - p); its running time integral is tracked but not
    /// hard-checked, because quadrature error on the sign-changing integrand
    /// accumulates
    pub p_one_minus_p: f64,
}

/// kappa selected for the Lyapunov functional, valid only under the
/// haptotaxis smallness condition min w0 > 1 - 1/rho.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaChoice {
    pub epsilon1: f64,
    pub kappa: f64,
    pub valid: bool,
}

/// Log-linear least-squares fit of a decaying positive series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// decay exponent (minus the fitted slope of ln value vs t)
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// A monitored inequality that failed, with the measured excess.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub monitor: &'static str,
    pub t: f64,
    pub value: f64,
    pub bound: f64,
}

/// Slacks for the a-priori bound monitors.
#[derive(Debug, Clone, Copy)]
pub struct MonitorSlacks {
    /// relative slack on the mass bound
    pub mass_rel: f64,
    /// absolute slack on the exponential sup bound for c
    pub c_abs: f64,
    /// absolute slack on the w range bound (the update makes it exact)
    pub w_abs: f64,
    /// relative slack on the time-integral bound (trapezoid accumulates O(dt))
    pub w1_integral_rel: f64,
}

impl Default for MonitorSlacks {
    fn default() -> Self {
        MonitorSlacks { mass_rel: 1e-3, c_abs: 1e-8, w_abs: 0.0, w1_integral_rel: 1e-2 }
    }
}

/// q = p (c+1)^{-alpha} e^{-rho w}, the weight that tames both taxis terms.
pub fn transform_q(state: &State, params: &Params) -> Field {
    let mut out = state.p.clone();
    for (k, v) in out.data_mut().iter_mut().enumerate() {
        let c = state.c.data()[k];
        let w = state.w.data()[k];
        *v *= (c + 1.0).powf(-params.alpha) * (-params.rho * w).exp();
    }
    out
}

/// z = p e^{-rho w}, the transform used for the uniform-convergence argument.
pub fn transform_z(state: &State, params: &Params) -> Field {
    let mut out = state.p.clone();
    for (k, v) in out.data_mut().iter_mut().enumerate() {
        *v *= (-params.rho * state.w.data()[k]).exp();
    }
    out
}

/// Per-cell |grad f|^2: face values squared, averaged to cells.
pub fn grad_sq_cells(field: &Field, grid: &Grid) -> Field {
    let g = gradient_faces(field, grid);
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = Field::zeros(grid);
    for j in 0..ny {
        for i in 0..nx {
            let mut s = 0.5 * (g.xf(i, j).powi(2) + g.xf(i + 1, j).powi(2));
            if grid.dim() == 2 {
                s += 0.5 * (g.yf(i, j).powi(2) + g.yf(i, j + 1).powi(2));
            }
            *out.at_mut(i, j) = s;
        }
    }
    out
}

/// Per-cell grad a . grad b: face products averaged to cells.
pub fn grad_dot_cells(a: &Field, b: &Field, grid: &Grid) -> Field {
    let ga = gradient_faces(a, grid);
    let gb = gradient_faces(b, grid);
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = Field::zeros(grid);
    for j in 0..ny {
        for i in 0..nx {
            let mut s = 0.5 * (ga.xf(i, j) * gb.xf(i, j) + ga.xf(i + 1, j) * gb.xf(i + 1, j));
            if grid.dim() == 2 {
                s += 0.5 * (ga.yf(i, j) * gb.yf(i, j) + ga.yf(i, j + 1) * gb.yf(i, j + 1));
            }
            *out.at_mut(i, j) = s;
        }
    }
    out
}

#[inline]
fn p_ln_p(p: f64) -> f64 {
    if p < P_FLOOR {
        0.0
    } else {
        p * p.ln()
    }
}

/// F(p, w) = kappa Int |grad w|^2 + Int p(ln p - 1) + rho Int p(w - 1)
///           - gamma kappa Int p(w - 1)^2.
///
/// The rho on the third term is forced by the identity dF/dt = G: expanding
/// the time derivative of Int p(w-1) along the system produces the terms
/// lambda rho Int p(1-p)(w-1), gamma rho Int p^2(1-w) and the cancellation
/// of rho Int grad p . grad w only when the term carries the rho weight.
pub fn lyapunov_f(state: &State, params: &Params, grid: &Grid, kappa: f64) -> f64 {
    let gw2 = grad_sq_cells(&state.w, grid);
    let mut sum = 0.0;
    for k in 0..grid.n_cells() {
        let p = state.p.data()[k];
        let w = state.w.data()[k];
        let wm1 = w - 1.0;
        sum += kappa * gw2.data()[k] + (p_ln_p(p) - p) + params.rho * p * wm1
            - params.gamma * kappa * p * wm1 * wm1;
    }
    sum * grid.cell_volume()
}

/// G(p, w, c), the exact time derivative of F along solutions. All eight
/// displayed terms, with the same face-averaged gradient quadrature as F.
pub fn dissipation_g(state: &State, params: &Params, grid: &Grid, kappa: f64) -> f64 {
    let (alpha, rho, lambda, gamma) = (params.alpha, params.rho, params.lambda, params.gamma);
    let gp2 = grad_sq_cells(&state.p, grid);
    let gw2 = grad_sq_cells(&state.w, grid);
    let gp_gc = grad_dot_cells(&state.p, &state.c, grid);
    let gc_gw = grad_dot_cells(&state.c, &state.w, grid);

    let mut sum = 0.0;
    for k in 0..grid.n_cells() {
        let p = state.p.data()[k];
        let c = state.c.data()[k];
        let w = state.w.data()[k];
        let wm1 = w - 1.0;

        sum += -gp2.data()[k] / p.max(P_FLOOR);
        sum += alpha / (1.0 + c) * gp_gc.data()[k];
        sum += (2.0 * alpha * gamma * kappa * (1.0 - w) + alpha * rho) * p / (1.0 + c) * gc_gw.data()[k];
        sum += (rho * rho - 2.0 * gamma * kappa + 2.0 * rho * gamma * kappa * (1.0 - w)) * p * gw2.data()[k];
        sum += lambda * (1.0 - p) * p_ln_p(p);
        sum += lambda * rho * p * (1.0 - p) * wm1;
        sum += gamma * rho * p * p * (1.0 - w);
        sum += 2.0 * gamma * gamma * kappa * p * p * wm1 * wm1;
        sum += -lambda * gamma * kappa * p * (1.0 - p) * wm1 * wm1;
    }
    sum * grid.cell_volume()
}

/// The integrals feeding the dissipation inequality and monitor 4.
pub fn dissipation_terms(state: &State, params: &Params, grid: &Grid) -> DissipationTerms {
    let _ = params;
    let gp2 = grad_sq_cells(&state.p, grid);
    let gw2 = grad_sq_cells(&state.w, grid);
    let gc2 = grad_sq_cells(&state.c, grid);
    let mut a = 0.0;
    let mut b = 0.0;
    let mut d = 0.0;
    let mut e = 0.0;
    let mut l1 = 0.0;
    let mut logistic = 0.0;
    for k in 0..grid.n_cells() {
        let p = state.p.data()[k];
        let w = state.w.data()[k];
        a += gp2.data()[k] / p.max(P_FLOOR);
        b += p * gw2.data()[k];
        d += p * (w - 1.0).abs();
        e += p * gc2.data()[k];
        l1 += (w - 1.0).abs();
        logistic += p * (1.0 - p);
    }
    let vol = grid.cell_volume();
    DissipationTerms {
        grad_p_sq_over_p: a * vol,
        p_grad_w_sq: b * vol,
        p_abs_w_minus_1: d * vol,
        p_grad_c_sq: e * vol,
        abs_w_minus_1: l1 * vol,
        p_one_minus_p: logistic * vol,
    }
}

/// Running trapezoidal time integral of one tracked term across a run;
/// the accessor picks the term (for instance `|t| t.p_one_minus_p` for the
/// signed logistic integral whose magnitude stays below
/// max{mass_p(0), |Omega|} / lambda).
pub fn running_time_integral(
    records: &[DiagRecord],
    terms: &[DissipationTerms],
    accessor: impl Fn(&DissipationTerms) -> f64,
) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(records.len());
    let mut acc = 0.0;
    for i in 0..records.len().min(terms.len()) {
        if i > 0 {
            let dt = records[i].t - records[i - 1].t;
            acc += 0.5 * dt * (accessor(&terms[i - 1]) + accessor(&terms[i]));
        }
        out.push((records[i].t, acc));
    }
    out
}

/// Fix the "sufficiently large" kappa deterministically: epsilon1 is the gap
/// left by rho (1 - min w0)_+, and kappa is the smallest value that pushes
/// rho^2 - 2 gamma kappa epsilon1 a full unit below -1.
pub fn choose_kappa(params: &Params, w0: &Field) -> KappaChoice {
    let min_w0 = w0.min();
    let rho = params.rho;
    if !(min_w0 > 1.0 - 1.0 / rho) {
        return KappaChoice { epsilon1: 0.0, kappa: 0.0, valid: false };
    }
    let eps1 = (1.0 - rho * (1.0 - min_w0).max(0.0)).clamp(f64::MIN_POSITIVE, 1.0);
    let kappa = (rho * rho + 2.0) / (2.0 * params.gamma * eps1);
    KappaChoice { epsilon1: eps1, kappa, valid: true }
}

fn lp_norm_dev(f: &Field, shift: f64, r: u32, grid: &Grid) -> f64 {
    let vol = grid.cell_volume();
    let sum: f64 = f.data().iter().map(|&v| (v - shift).abs().powi(r as i32)).sum();
    (sum * vol).powf(1.0 / r as f64)
}

/// Fill one diagnostics row from the state.
pub fn record(state: &State, params: &Params, grid: &Grid, kappa: f64, lr: &[u32]) -> DiagRecord {
    let vol = grid.cell_volume();
    let measure = grid.measure();

    let mass_p = state.p.integral(grid);
    let mean_p = mass_p / measure;

    let linf_p_minus_1 = state.p.data().iter().map(|&v| (v - 1.0).abs()).fold(0.0, f64::max);
    let l2_p_minus_1 = lp_norm_dev(&state.p, 1.0, 2, grid);
    let lr_norms: Vec<(u32, f64)> = lr.iter().map(|&r| (r, lp_norm_dev(&state.p, 1.0, r, grid))).collect();

    let gc2 = grad_sq_cells(&state.c, grid);
    let gw2 = grad_sq_cells(&state.w, grid);
    let c_l2_sq: f64 = state.c.data().iter().map(|&v| v * v).sum::<f64>() * vol;
    let gc_l2_sq: f64 = gc2.data().iter().sum::<f64>() * vol;
    let wm1_l2_sq: f64 = state.w.data().iter().map(|&v| (v - 1.0) * (v - 1.0)).sum::<f64>() * vol;
    let gw_l2_sq: f64 = gw2.data().iter().sum::<f64>() * vol;

    DiagRecord {
        t: state.t,
        mass_p,
        mean_p,
        linf_p_minus_1,
        l2_p_minus_1,
        lr_norms,
        w12_c: (c_l2_sq + gc_l2_sq).sqrt(),
        w12_w_minus_1: (wm1_l2_sq + gw_l2_sq).sqrt(),
        linf_c: state.c.data().iter().map(|&v| v.abs()).fold(0.0, f64::max),
        grad_w_l2_sq: gw_l2_sq,
        lyapunov_f: lyapunov_f(state, params, grid, kappa),
        dissipation_g: dissipation_g(state, params, grid, kappa),
        min_p: state.p.min(),
        max_p: state.p.max(),
        min_w: state.w.min(),
        max_w: state.w.max(),
    }
}

/// Residual of the mean-value ODE
///   d mean(p)/dt = -lambda mean(p)(mean(p) - 1) - lambda/|Omega| ||p - mean(p)||_2^2
/// evaluated with a centered difference over uniformly spaced records.
/// Returns (t, residual) for every interior record.
pub fn mean_ode_residual(
    records: &[DiagRecord],
    lambda: f64,
    measure: f64,
) -> Result<Vec<(f64, f64)>, SimError> {
    if records.len() < 3 {
        return Err(SimError::Input(format!(
            "mean_ode_residual needs at least 3 records, got {}",
            records.len()
        )));
    }
    let dt0 = records[1].t - records[0].t;
    for w in records.windows(2) {
        let d = w[1].t - w[0].t;
        if (d - dt0).abs() > 1e-9 * dt0.abs().max(1.0) {
            return Err(SimError::Input("records are not uniformly spaced".to_string()));
        }
    }
    let mut out = Vec::with_capacity(records.len() - 2);
    for i in 1..records.len() - 1 {
        let r = &records[i];
        let dmean = (records[i + 1].mean_p - records[i - 1].mean_p) / (2.0 * dt0);
        // ||p - mean||^2 = ||p - 1||^2 - |Omega| (mean - 1)^2
        let var = (r.l2_p_minus_1.powi(2) - measure * (r.mean_p - 1.0).powi(2)).max(0.0);
        let res = dmean + lambda * r.mean_p * (r.mean_p - 1.0) + lambda / measure * var;
        out.push((r.t, res));
    }
    Ok(out)
}

/// Least-squares line through (t, ln value) for in-window samples with
/// positive values; rate is minus the slope.
pub fn fit_decay_rate(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<RateFit, SimError> {
    if times.len() != values.len() {
        return Err(SimError::Input("times and values must have equal length".to_string()));
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= window.0 && **t <= window.1 && **v > 0.0)
        .map(|(t, v)| (*t, v.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(SimError::Input(format!(
            "decay fit needs at least 8 positive in-window samples, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let mx = sx / n;
    let my = sy / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(SimError::Input("decay fit needs samples at distinct times".to_string()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - (intercept + slope * p.0)).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { rate: -slope, intercept, r_squared, window })
}

/// Check the four a-priori bounds across a run. `records[0]` is the initial
/// record; `terms` must align with `records`. Empty result means every
/// monitored inequality holds within the slacks.
pub fn bound_monitors(
    records: &[DiagRecord],
    terms: &[DissipationTerms],
    params: &Params,
    measure: f64,
    slacks: &MonitorSlacks,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let Some(initial) = records.first() else {
        return out;
    };

    let mass_bound = initial.mass_p.max(measure) * (1.0 + slacks.mass_rel);
    let w_upper = initial.max_w.max(1.0) + slacks.w_abs;
    // Int_0^inf Int p |w-1| <= ||w0 - 1||_L1 / gamma, by integrating
    // d|w-1|/dt = -gamma p |w-1| in time.
    let w0_minus_1_l1 = terms.first().map(|t| t.abs_w_minus_1).unwrap_or(0.0);
    let integral_bound = w0_minus_1_l1 / params.gamma * (1.0 + slacks.w1_integral_rel);

    let mut running = 0.0;
    for (i, r) in records.iter().enumerate() {
        if r.mass_p > mass_bound {
            out.push(Violation { monitor: "mass_p", t: r.t, value: r.mass_p, bound: mass_bound });
        }
        let c_bound = initial.linf_c * (-r.t).exp() + slacks.c_abs;
        if r.linf_c > c_bound {
            out.push(Violation { monitor: "linf_c_decay", t: r.t, value: r.linf_c, bound: c_bound });
        }
        if r.min_w < -slacks.w_abs || r.max_w > w_upper {
            out.push(Violation { monitor: "w_range", t: r.t, value: r.min_w.min(r.max_w), bound: w_upper });
        }
        if i > 0 && i < terms.len() {
            let dt = r.t - records[i - 1].t;
            running += 0.5 * dt * (terms[i - 1].p_abs_w_minus_1 + terms[i].p_abs_w_minus_1);
            if running > integral_bound {
                out.push(Violation {
                    monitor: "p_w_minus_1_time_integral",
                    t: r.t,
                    value: running,
                    bound: integral_bound,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::steady_state;
    use std::f64::consts::LN_2;

    fn unit_grid(n: usize) -> Grid {
        Grid::new_1d(1.0, n).unwrap()
    }

    #[test]
    fn transform_q_examples() {
        let g = unit_grid(8);
        // c = 0, w = 0 leaves q = p
        let s = State::new(&g, Field::constant(&g, 3.0), Field::constant(&g, 0.0), Field::constant(&g, 0.0)).unwrap();
        let q = transform_q(&s, &Params::default());
        assert!(q.data().iter().all(|&v| (v - 3.0).abs() < 1e-15));

        // p = 2, c = 1, w = 0, alpha = 1: q = 2 * 2^{-1} = 1
        let params = Params::new(1.0, 0.5, 1.0, 1.0, 1.0).unwrap();
        let s = State::new(&g, Field::constant(&g, 2.0), Field::constant(&g, 1.0), Field::constant(&g, 0.0)).unwrap();
        let q = transform_q(&s, &params);
        assert!(q.data().iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn transform_z_examples() {
        let g = unit_grid(8);
        let params = Params::new(0.5, LN_2, 1.0, 1.0, 1.0).unwrap();
        // rho = ln 2, p = 4, w = 1: z = 4 e^{-ln 2} = 2
        let s = State::new(&g, Field::constant(&g, 4.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let z = transform_z(&s, &params);
        assert!(z.data().iter().all(|&v| (v - 2.0).abs() < 1e-14));

        // w = 0 leaves z = p
        let s = State::new(&g, Field::constant(&g, 4.0), Field::constant(&g, 0.0), Field::constant(&g, 0.0)).unwrap();
        let z = transform_z(&s, &params);
        assert!(z.data().iter().all(|&v| (v - 4.0).abs() < 1e-15));

        // at the equilibrium z is the constant e^{-rho}
        let params = Params::new(0.5, 0.7, 1.0, 1.0, 1.0).unwrap();
        let s = steady_state(&g);
        let z = transform_z(&s, &params);
        assert!(z.data().iter().all(|&v| (v - (-0.7f64).exp()).abs() < 1e-15));
    }

    #[test]
    fn transforms_are_dominated_by_p() {
        // q <= z <= p pointwise whenever c, w >= 0
        let g = unit_grid(16);
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        let p = Field::from_fn(&g, |_, _| 2.0 * next());
        let c = Field::from_fn(&g, |_, _| 3.0 * next());
        let w = Field::from_fn(&g, |_, _| 1.5 * next());
        let s = State::new(&g, p, c, w).unwrap();
        let params = Params::new(0.7, 1.3, 1.0, 1.0, 1.0).unwrap();
        let q = transform_q(&s, &params);
        let z = transform_z(&s, &params);
        for k in 0..g.n_cells() {
            assert!(q.data()[k] <= z.data()[k] + 1e-15);
            assert!(z.data()[k] <= s.p.data()[k] + 1e-15);
        }
    }

    #[test]
    fn lyapunov_f_at_equilibrium_is_minus_measure() {
        let g = Grid::new_2d(1.5, 2.0, 8, 8).unwrap();
        let s = steady_state(&g);
        let f = lyapunov_f(&s, &Params::default(), &g, 2.0);
        assert!((f + g.measure()).abs() < 1e-12);
        // independent of kappa at the equilibrium
        let f2 = lyapunov_f(&s, &Params::default(), &g, 17.0);
        assert!((f - f2).abs() < 1e-13);
    }

    #[test]
    fn lyapunov_f_constant_p_two() {
        // p = 2, w = 1 on (0,1): F = 2 (ln 2 - 1)
        let g = unit_grid(32);
        let s = State::new(&g, Field::constant(&g, 2.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let f = lyapunov_f(&s, &Params::default(), &g, 1.0);
        assert!((f - 2.0 * (LN_2 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn dissipation_g_at_equilibrium_is_zero() {
        let g = unit_grid(16);
        let s = steady_state(&g);
        assert!(dissipation_g(&s, &Params::default(), &g, 3.0).abs() < 1e-13);
    }

    #[test]
    fn dissipation_g_constant_state_single_term() {
        // (p, c, w) = (2, 0, 1): only lambda p (1-p) ln p survives,
        // G = -2 lambda ln 2
        let g = unit_grid(16);
        let params = Params::new(0.5, 0.5, 1.7, 1.0, 1.0).unwrap();
        let s = State::new(&g, Field::constant(&g, 2.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let gval = dissipation_g(&s, &params, &g, 4.2);
        assert!((gval - (-2.0 * params.lambda * LN_2)).abs() < 1e-12);
    }

    #[test]
    fn kappa_choice_examples() {
        let params = Params::new(0.5, 0.5, 1.0, 1.0, 2.0).unwrap();
        let g = unit_grid(8);

        // w0 = 1: epsilon1 = 1, kappa = (rho^2 + 2) / (2 gamma)
        let k = choose_kappa(&params, &Field::constant(&g, 1.0));
        assert!(k.valid);
        assert!((k.epsilon1 - 1.0).abs() < 1e-15);
        assert!((k.kappa - (0.25 + 2.0) / (2.0 * 2.0)).abs() < 1e-14);
        // the selected kappa satisfies the strict margin
        assert!(params.rho.powi(2) - 2.0 * params.gamma * k.kappa * k.epsilon1 < -1.0);

        // w0 >= 1 everywhere behaves like w0 = 1 (positive part truncation)
        let k15 = choose_kappa(&params, &Field::constant(&g, 1.5));
        assert_eq!(k15.kappa, k.kappa);

        // rho = 2, min w0 = 0.4 < 0.5: invalid
        let params2 = Params::new(0.5, 2.0, 1.0, 1.0, 1.0).unwrap();
        let k2 = choose_kappa(&params2, &Field::constant(&g, 0.4));
        assert!(!k2.valid);
    }

    #[test]
    fn record_equilibrium_and_constant_p() {
        let g = unit_grid(64);
        let s = steady_state(&g);
        let r = record(&s, &Params::default(), &g, 1.0, &[4]);
        assert_eq!(r.linf_p_minus_1, 0.0);
        assert_eq!(r.l2_p_minus_1, 0.0);
        assert_eq!(r.w12_c, 0.0);
        assert_eq!(r.w12_w_minus_1, 0.0);
        assert!((r.lyapunov_f + g.measure()).abs() < 1e-12);
        assert!(r.dissipation_g.abs() < 1e-13);
        assert!((r.mean_p - 1.0).abs() < 1e-14);

        // p = 3 on (0,1): mass 3, mean 3, ||p-1||_2 = 2
        let s3 = State::new(&g, Field::constant(&g, 3.0), Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let r3 = record(&s3, &Params::default(), &g, 1.0, &[4]);
        assert!((r3.mass_p - 3.0).abs() < 1e-13);
        assert!((r3.mean_p - 3.0).abs() < 1e-13);
        assert!((r3.l2_p_minus_1 - 2.0).abs() < 1e-13);
    }

    #[test]
    fn l2_versus_lr_holder_instance() {
        // ||f||_2 <= |Omega|^{1/2 - 1/r} ||f||_r for r >= 2
        let g = Grid::new_1d(2.0, 32).unwrap();
        let p = Field::from_fn(&g, |x, _| 1.0 + x * x - 0.5 * x);
        let s = State::new(&g, p, Field::constant(&g, 0.0), Field::constant(&g, 1.0)).unwrap();
        let r = record(&s, &Params::default(), &g, 1.0, &[4]);
        let l4 = r.lr_norms.iter().find(|(rr, _)| *rr == 4).unwrap().1;
        let bound = g.measure().powf(0.5 - 0.25) * l4;
        assert!(r.l2_p_minus_1 <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn fit_decay_exact_exponential() {
        let times: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| (-2.0 * t).exp()).collect();
        let fit = fit_decay_rate(&times, &values, (0.0, 11.0)).unwrap();
        assert!((fit.rate - 2.0).abs() <= 1e-10);
        assert!((fit.r_squared - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn fit_decay_with_amplitude() {
        let times: Vec<f64> = (0..20).map(|k| 0.5 * k as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| 5.0 * (-0.7 * t).exp()).collect();
        let fit = fit_decay_rate(&times, &values, (0.0, 10.0)).unwrap();
        assert!((fit.rate - 0.7).abs() <= 1e-10);
        assert!((fit.intercept - 5.0f64.ln()).abs() <= 1e-10);
    }

    #[test]
    fn fit_decay_constant_series_has_zero_rate() {
        let times: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let values = vec![3.5; 10];
        let fit = fit_decay_rate(&times, &values, (0.0, 10.0)).unwrap();
        assert_eq!(fit.rate, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn fit_decay_too_few_samples_is_input_error() {
        let times = vec![1.0, 2.0, 3.0];
        let values = vec![1.0, 0.5, 0.25];
        assert!(fit_decay_rate(&times, &values, (0.0, 10.0)).is_err());
        // positives filtered out count too
        let times: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let values = vec![0.0; 10];
        assert!(fit_decay_rate(&times, &values, (0.0, 10.0)).is_err());
    }

    #[test]
    fn mean_ode_residual_equilibrium() {
        let g = unit_grid(16);
        let params = Params::default();
        let s = steady_state(&g);
        let mut records = Vec::new();
        for k in 0..5 {
            let mut r = record(&s, &params, &g, 1.0, &[]);
            r.t = 0.1 * k as f64;
            records.push(r);
        }
        let res = mean_ode_residual(&records, params.lambda, g.measure()).unwrap();
        assert_eq!(res.len(), 3);
        assert!(res.iter().all(|(_, v)| v.abs() <= 1e-10));
    }

    #[test]
    fn mean_ode_residual_needs_three_uniform_records() {
        let g = unit_grid(16);
        let s = steady_state(&g);
        let r = record(&s, &Params::default(), &g, 1.0, &[]);
        assert!(mean_ode_residual(&[r.clone(), r.clone()], 1.0, 1.0).is_err());
        let mut r2 = r.clone();
        r2.t = 0.1;
        let mut r3 = r.clone();
        r3.t = 0.35;
        assert!(mean_ode_residual(&[r, r2, r3], 1.0, 1.0).is_err());
    }

    #[test]
    fn monitors_pass_on_equilibrium_and_flag_injected_fault() {
        let g = unit_grid(16);
        let params = Params::default();
        let s = steady_state(&g);
        let mut records = Vec::new();
        let mut terms = Vec::new();
        for k in 0..4 {
            let mut r = record(&s, &params, &g, 1.0, &[]);
            r.t = k as f64;
            records.push(r);
            terms.push(dissipation_terms(&s, &params, &g));
        }
        let v = bound_monitors(&records, &terms, &params, g.measure(), &MonitorSlacks::default());
        assert!(v.is_empty(), "unexpected violations: {v:?}");

        // corrupt one record's mass to twice the bound
        records[2].mass_p = 2.0 * g.measure();
        let v = bound_monitors(&records, &terms, &params, g.measure(), &MonitorSlacks::default());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].monitor, "mass_p");
    }
}
