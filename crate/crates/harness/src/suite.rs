//! The acceptance suite: every claim the artifact makes about itself,
//! runnable as `angiosim suite` or through the `acceptance` test target.
//! Thresholds are pinned here and nowhere else.

use crate::config::{Config, GridSpec, InitFamily};
use crate::error::HarnessError;
use crate::oracle::{self, OdeState};
use crate::scenario::{self, RunOutput};
use angio_core::diagnostics::{self, DiagRecord};
use angio_core::ops;
use angio_core::semigroup;
use angio_core::{Field, Grid, Params, State};
use std::f64::consts::PI;

/// p and w sit on the constant 1, so their deviation norms bottom out at the
/// solver's numerical fixed-point offset (about 1e-12 after the 1.6e4 steps
/// of the pinned rate run); samples below ten times that plateau measure
/// arithmetic noise, not decay, and the rate fits drop them the same way
/// they drop nonpositive samples. Absolute quantities like the c norms have
/// full floating-point range and take no floor.
pub const DEVIATION_NOISE_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] {}  {} — {}", self.id, self.name, self.details)
    }
}

// ---------------------------------------------------------------------------
// scenario definitions (the single source of truth for the suite runs)
// ---------------------------------------------------------------------------

pub fn equilibrium_1d() -> Config {
    let mut cfg = Config::bare("equilibrium-1d", GridSpec { dim: 1, lengths: [1.0, 1.0], cells: [256, 1] }, 10.0);
    cfg.cadence = 0.5;
    cfg
}

pub fn equilibrium_2d() -> Config {
    let mut cfg = Config::bare("equilibrium-2d", GridSpec { dim: 2, lengths: [1.0, 1.0], cells: [96, 96] }, 10.0);
    cfg.cadence = 0.5;
    cfg
}

pub fn homogeneous_oracle(dt: f64) -> Config {
    let mut cfg = Config::bare("homogeneous-oracle", GridSpec { dim: 1, lengths: [1.0, 1.0], cells: [64, 1] }, 10.0);
    cfg.cadence = 0.5;
    cfg.step.dt = Some(dt);
    cfg.init.p_base = 0.5;
    cfg.init.c_base = 1.0;
    cfg.init.w_base = 0.8;
    cfg.snapshots = vec![2.5, 5.0, 7.5, 10.0];
    cfg
}

/// Cosine-bump data with w0 > 1 - 1/rho, theta = 1/2, records every step.
pub fn lyapunov_1d(cells: usize, dt: f64) -> Config {
    let mut cfg = Config::bare("lyapunov-1d", GridSpec { dim: 1, lengths: [1.0, 1.0], cells: [cells, 1] }, 4.0);
    cfg.cadence = dt;
    cfg.step.dt = Some(dt);
    cfg.step.theta = 0.5;
    cfg.init.family = InitFamily::CosineBump;
    cfg.init.p_amp = 0.2;
    cfg.init.c_base = 0.5;
    cfg.init.c_amp = 0.25;
    cfg.init.w_amp = -0.2;
    cfg
}

/// The decay-rate scenario on the unit interval: lambda1 = pi^2 > 1, so the
/// predicted rates are governed by min{1, gamma, lambda}.
pub fn thm2_rates_1d(gamma: f64, dt: f64, cadence: f64) -> Config {
    let name = if (gamma - 1.0).abs() < 1e-12 { "thm2-rates-1d" } else { "thm2-rates-1d-gamma-half" };
    let mut cfg = Config::bare(name, GridSpec { dim: 1, lengths: [1.0, 1.0], cells: [256, 1] }, 40.0);
    cfg.cadence = cadence;
    cfg.step.dt = Some(dt);
    cfg.params.gamma = gamma;
    cfg.init.family = InitFamily::CosineBump;
    cfg.init.p_amp = 0.2;
    cfg.init.c_base = 0.5;
    cfg.init.c_amp = 0.25;
    cfg.init.w_amp = -0.2;
    cfg.fit.window_lo = 0.5;
    cfg.fit.window_hi = 1.0;
    cfg
}

/// Gentle 1D run whose (t, p, c) snapshots feed the spectral reconstruction.
pub fn variation_of_constants_1d(dt: f64, snap_cadence: f64) -> Config {
    let horizon = 2.0;
    let mut cfg =
        Config::bare("variation-of-constants-1d", GridSpec { dim: 1, lengths: [1.0, 1.0], cells: [128, 1] }, horizon);
    cfg.cadence = snap_cadence;
    cfg.step.dt = Some(dt);
    cfg.init.family = InitFamily::CosineBump;
    cfg.init.p_amp = 0.1;
    cfg.init.c_base = 0.5;
    cfg.init.c_amp = 0.2;
    cfg.init.w_amp = -0.1;
    let n = (horizon / snap_cadence).round() as usize;
    cfg.snapshots = (0..=n).map(|j| j as f64 * snap_cadence).collect();
    cfg
}

// ---------------------------------------------------------------------------
// shared runs, computed once
// ---------------------------------------------------------------------------

#[derive(Default)]
struct Ctx {
    eq1d: Option<RunOutput>,
    eq2d: Option<RunOutput>,
    homog: Vec<(f64, RunOutput)>,
    thm2_g1: Option<RunOutput>,
    thm2_g1_half: Option<RunOutput>,
    thm2_g05: Option<RunOutput>,
    lyap: Vec<(usize, RunOutput)>,
    voc: Vec<(f64, f64, RunOutput)>,
}

const THM2_DT: f64 = 2.5e-3;
const THM2_CADENCE: f64 = 0.25;
const LYAP_LEVELS: [(usize, f64); 3] = [(64, 4e-3), (128, 2e-3), (256, 1e-3)];
const VOC_LEVELS: [(f64, f64); 3] = [(1e-2, 0.1), (5e-3, 0.05), (2.5e-3, 0.025)];
const HOMOG_DTS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

impl Ctx {
    fn eq1d(&mut self) -> Result<&RunOutput, HarnessError> {
        if self.eq1d.is_none() {
            self.eq1d = Some(scenario::run_scenario_core(&equilibrium_1d())?);
        }
        Ok(self.eq1d.as_ref().unwrap())
    }

    fn eq2d(&mut self) -> Result<&RunOutput, HarnessError> {
        if self.eq2d.is_none() {
            self.eq2d = Some(scenario::run_scenario_core(&equilibrium_2d())?);
        }
        Ok(self.eq2d.as_ref().unwrap())
    }

    fn homog(&mut self, dt: f64) -> Result<&RunOutput, HarnessError> {
        if !self.homog.iter().any(|(d, _)| *d == dt) {
            let run = scenario::run_scenario_core(&homogeneous_oracle(dt))?;
            self.homog.push((dt, run));
        }
        Ok(&self.homog.iter().find(|(d, _)| *d == dt).unwrap().1)
    }

    fn thm2_g1(&mut self) -> Result<&RunOutput, HarnessError> {
        if self.thm2_g1.is_none() {
            self.thm2_g1 = Some(scenario::run_scenario_core(&thm2_rates_1d(1.0, THM2_DT, THM2_CADENCE))?);
        }
        Ok(self.thm2_g1.as_ref().unwrap())
    }

    fn thm2_g1_half(&mut self) -> Result<&RunOutput, HarnessError> {
        if self.thm2_g1_half.is_none() {
            self.thm2_g1_half =
                Some(scenario::run_scenario_core(&thm2_rates_1d(1.0, 0.5 * THM2_DT, 0.5 * THM2_CADENCE))?);
        }
        Ok(self.thm2_g1_half.as_ref().unwrap())
    }

    fn thm2_g05(&mut self) -> Result<&RunOutput, HarnessError> {
        if self.thm2_g05.is_none() {
            self.thm2_g05 = Some(scenario::run_scenario_core(&thm2_rates_1d(0.5, THM2_DT, THM2_CADENCE))?);
        }
        Ok(self.thm2_g05.as_ref().unwrap())
    }

    fn lyap(&mut self, cells: usize, dt: f64) -> Result<&RunOutput, HarnessError> {
        if !self.lyap.iter().any(|(c, _)| *c == cells) {
            let run = scenario::run_scenario_core(&lyapunov_1d(cells, dt))?;
            self.lyap.push((cells, run));
        }
        Ok(&self.lyap.iter().find(|(c, _)| *c == cells).unwrap().1)
    }

    fn voc(&mut self, dt: f64, cad: f64) -> Result<&RunOutput, HarnessError> {
        if !self.voc.iter().any(|(d, c, _)| *d == dt && *c == cad) {
            let run = scenario::run_scenario_core(&variation_of_constants_1d(dt, cad))?;
            self.voc.push((dt, cad, run));
        }
        Ok(&self.voc.iter().find(|(d, c, _)| *d == dt && *c == cad).unwrap().2)
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

/// Least-squares order of err_k ~ C 2^{-order k} over refinement levels.
fn fitted_order(errors: &[f64]) -> f64 {
    let n = errors.len() as f64;
    let xs: Vec<f64> = (0..errors.len()).map(|k| k as f64 * std::f64::consts::LN_2).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.max(1e-300).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    -(sxy / sxx)
}

/// Error scale for oracle comparisons: absolute below 1, relative above.
fn scaled_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn max_centered_fg_gap(records: &[DiagRecord], window: (f64, f64)) -> f64 {
    let mut worst = 0.0f64;
    for i in 1..records.len().saturating_sub(1) {
        let t = records[i].t;
        if t < window.0 || t > window.1 {
            continue;
        }
        let dt = records[i + 1].t - records[i - 1].t;
        let dfdt = (records[i + 1].lyapunov_f - records[i - 1].lyapunov_f) / dt;
        worst = worst.max((dfdt - records[i].dissipation_g).abs());
    }
    worst
}

fn check(cond: bool, label: &str, failures: &mut Vec<String>) {
    if !cond {
        failures.push(label.to_string());
    }
}

fn result(id: &'static str, name: &'static str, failures: Vec<String>, details: String) -> CriterionResult {
    if failures.is_empty() {
        CriterionResult { id, name, passed: true, details }
    } else {
        CriterionResult { id, name, passed: false, details: format!("{details}; failed: {}", failures.join(" | ")) }
    }
}

fn error_result(id: &'static str, name: &'static str, e: HarnessError) -> CriterionResult {
    CriterionResult { id, name, passed: false, details: format!("error: {e}") }
}

fn xorshift_unit(state: &mut u64) -> f64 {
    *state ^= *state >> 12;
    *state ^= *state << 25;
    *state ^= *state >> 27;
    let v = state.wrapping_mul(0x2545_F491_4F6C_DD1D);
    (v >> 11) as f64 / (1u64 << 53) as f64
}

// ---------------------------------------------------------------------------
// the ten criteria
// ---------------------------------------------------------------------------

fn c1_equilibrium(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let mut worst_dev = 0.0f64;
    let mut worst_f = 0.0f64;
    for which in ["1d", "2d"] {
        let run = if which == "1d" { ctx.eq1d()? } else { ctx.eq2d()? };
        let f0 = run.traj.records[0].lyapunov_f;
        for r in &run.traj.records {
            let dev = (r.max_p - 1.0)
                .abs()
                .max((r.min_p - 1.0).abs())
                .max(r.linf_c)
                .max((r.max_w - 1.0).abs())
                .max((r.min_w - 1.0).abs());
            worst_dev = worst_dev.max(dev);
            worst_f = worst_f.max((r.lyapunov_f - f0).abs());
        }
        check(run.traj.total_clips == 0, &format!("{which}: clips != 0"), &mut failures);
    }
    check(worst_dev <= 1e-10, &format!("field deviation {worst_dev:.2e} > 1e-10"), &mut failures);
    check(worst_f <= 1e-10, &format!("F drift {worst_f:.2e} > 1e-10"), &mut failures);
    Ok(result(
        "C1",
        "equilibrium fidelity (1,0,1)",
        failures,
        format!("max field deviation {worst_dev:.2e}, max F drift {worst_f:.2e} over T = 10 (1D/256 and 2D/96^2)"),
    ))
}

fn c2_homogeneous(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let params = Params::default();
    let oracle_trace = oracle::ode_oracle(&params, OdeState::new(0.5, 1.0, 0.8), 10.0, 1e-4)?;
    let ora = *oracle_trace.last().unwrap();

    let mut errs = Vec::new();
    let mut spread_worst = 0.0f64;
    let mut details_first = String::new();
    for &dt in &HOMOG_DTS {
        let run = ctx.homog(dt)?;
        for r in &run.traj.records {
            spread_worst = spread_worst.max(r.max_p - r.min_p).max(r.max_w - r.min_w);
        }
        for (_, snap) in &run.traj.snapshots {
            for f in [&snap.p, &snap.c, &snap.w] {
                spread_worst = spread_worst.max(f.max() - f.min());
            }
        }
        let last = run
            .traj
            .snapshots
            .iter()
            .find(|(t, _)| (*t - 10.0).abs() < 1e-6)
            .map(|(_, s)| s)
            .ok_or_else(|| HarnessError::Scenario("missing snapshot at T = 10".to_string()))?;
        let (p, c, w) = (last.p.data()[0], last.c.data()[0], last.w.data()[0]);
        let err = scaled_err(p, ora.p).max(scaled_err(c, ora.c)).max(scaled_err(w, ora.w));
        if dt == HOMOG_DTS[0] {
            details_first = format!(
                "dt=1e-3: err(p)={:.2e} err(c)={:.2e} err(w)={:.2e}",
                scaled_err(p, ora.p),
                scaled_err(c, ora.c),
                scaled_err(w, ora.w)
            );
            check(err <= 1e-4, &format!("oracle gap {err:.2e} > 1e-4"), &mut failures);
        }
        errs.push(err);
    }
    check(spread_worst <= 1e-12, &format!("spatial spread {spread_worst:.2e} > 1e-12"), &mut failures);
    let order = fitted_order(&errs);
    check(order >= 0.9, &format!("temporal order {order:.2} < 0.9"), &mut failures);
    Ok(result(
        "C2",
        "homogeneous-ODE oracle equivalence",
        failures,
        format!("{details_first}; spread {spread_worst:.2e}; order {order:.2}"),
    ))
}

fn c3_monitors(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let mut checked = 0;
    // every scenario the suite runs must keep all four bounds and stay
    // clip-free
    let all: Vec<(&'static str, &RunOutput, Params)> = {
        // collect in stages to satisfy the borrow checker
        ctx.eq1d()?;
        ctx.eq2d()?;
        ctx.homog(HOMOG_DTS[0])?;
        ctx.thm2_g1()?;
        ctx.thm2_g05()?;
        ctx.lyap(LYAP_LEVELS[2].0, LYAP_LEVELS[2].1)?;
        ctx.voc(VOC_LEVELS[2].0, VOC_LEVELS[2].1)?;
        let mut v: Vec<(&'static str, &RunOutput, Params)> = vec![
            ("equilibrium-1d", ctx.eq1d.as_ref().unwrap(), equilibrium_1d().params),
            ("equilibrium-2d", ctx.eq2d.as_ref().unwrap(), equilibrium_2d().params),
            (
                "homogeneous-oracle",
                &ctx.homog.iter().find(|(d, _)| *d == HOMOG_DTS[0]).unwrap().1,
                homogeneous_oracle(HOMOG_DTS[0]).params,
            ),
            ("thm2-rates-1d", ctx.thm2_g1.as_ref().unwrap(), thm2_rates_1d(1.0, THM2_DT, THM2_CADENCE).params),
            (
                "thm2-rates-1d-gamma-half",
                ctx.thm2_g05.as_ref().unwrap(),
                thm2_rates_1d(0.5, THM2_DT, THM2_CADENCE).params,
            ),
            (
                "lyapunov-1d/256",
                &ctx.lyap.iter().find(|(c, _)| *c == LYAP_LEVELS[2].0).unwrap().1,
                lyapunov_1d(LYAP_LEVELS[2].0, LYAP_LEVELS[2].1).params,
            ),
        ];
        v.push((
            "variation-of-constants-1d",
            &ctx.voc.iter().find(|(d, c, _)| *d == VOC_LEVELS[2].0 && *c == VOC_LEVELS[2].1).unwrap().2,
            variation_of_constants_1d(VOC_LEVELS[2].0, VOC_LEVELS[2].1).params,
        ));
        v
    };
    for (name, run, params) in all {
        checked += 1;
        let violations = scenario::monitor_violations(run, &params);
        check(
            violations.is_empty(),
            &format!("{name}: {} monitor violations (first: {:?})", violations.len(), violations.first()),
            &mut failures,
        );
        check(run.traj.total_clips == 0, &format!("{name}: {} positivity clips", run.traj.total_clips), &mut failures);
        check(
            run.traj.min_p_over_run >= 0.0,
            &format!("{name}: min p {} < 0", run.traj.min_p_over_run),
            &mut failures,
        );
    }
    Ok(result(
        "C3",
        "a-priori bound monitors",
        failures,
        format!("mass, c-decay, w-range and time-integral bounds hold on {checked} scenarios, zero clips"),
    ))
}

fn c4_lyapunov_identity(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let mut gaps = Vec::new();
    for &(cells, dt) in &LYAP_LEVELS {
        let run = ctx.lyap(cells, dt)?;
        let horizon = 4.0;
        gaps.push(max_centered_fg_gap(&run.traj.records, (0.1 * horizon, 0.9 * horizon)));
    }
    let order = fitted_order(&gaps);
    check(order >= 0.9, &format!("order {order:.2} < 0.9"), &mut failures);
    check(gaps.windows(2).all(|w| w[1] < w[0]), "discrepancy not monotone under refinement", &mut failures);
    Ok(result(
        "C4",
        "Lyapunov identity dF/dt = G",
        failures,
        format!(
            "max |dF/dt - G| = {:.3e} -> {:.3e} -> {:.3e} over 64 -> 128 -> 256 cells (dt halved with h), order {order:.2}",
            gaps[0], gaps[1], gaps[2]
        ),
    ))
}

fn c5_dissipation_structure(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let run = ctx.lyap(LYAP_LEVELS[2].0, LYAP_LEVELS[2].1)?;
    check(run.kappa.valid, "kappa selection invalid for this data", &mut failures);

    let mut c_fit = 0.0f64;
    let mut lhs_max = f64::NEG_INFINITY;
    let mut rhs_min = f64::INFINITY;
    for (r, t) in run.traj.records.iter().zip(&run.traj.terms) {
        let lhs = r.dissipation_g + 0.5 * t.grad_p_sq_over_p + 0.5 * t.p_grad_w_sq;
        let rhs = t.p_abs_w_minus_1 + t.p_grad_c_sq;
        lhs_max = lhs_max.max(lhs);
        rhs_min = rhs_min.min(rhs);
        if rhs > 1e-14 && lhs > 0.0 {
            c_fit = c_fit.max(lhs / rhs);
        } else if rhs <= 1e-14 && lhs > 1e-12 {
            failures.push(format!("t = {}: positive left side {lhs:.2e} with vanishing right side", r.t));
        }
    }
    check(c_fit.is_finite(), "fitted constant not finite", &mut failures);
    // with the fitted run-level constant, the inequality holds at every record
    for (r, t) in run.traj.records.iter().zip(&run.traj.terms) {
        let lhs = r.dissipation_g + 0.5 * t.grad_p_sq_over_p + 0.5 * t.p_grad_w_sq;
        let rhs = t.p_abs_w_minus_1 + t.p_grad_c_sq;
        if lhs > c_fit * rhs + 1e-12 {
            failures.push(format!("t = {}: inequality violated", r.t));
            break;
        }
    }
    Ok(result(
        "C5",
        "dissipation inequality structure",
        failures,
        format!(
            "G + (1/2)Int |grad p|^2/p + (1/2)Int p |grad w|^2 <= C (Int p|w-1| + Int p|grad c|^2) with C = {c_fit:.4}; max left side {lhs_max:.3e}, min right side {rhs_min:.3e} (kappa = {:.4}, eps1 = {:.3})",
            run.kappa.kappa, run.kappa.epsilon1
        ),
    ))
}

fn c6_decay_rates(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let window = (20.0, 40.0);

    let denoise = |v: f64| if v > DEVIATION_NOISE_FLOOR { v } else { 0.0 };

    let fit3 = |run: &RunOutput| -> Result<(diagnostics::RateFit, diagnostics::RateFit, diagnostics::RateFit), HarnessError> {
        let times: Vec<f64> = run.traj.records.iter().map(|r| r.t).collect();
        let c: Vec<f64> = run.traj.records.iter().map(|r| r.w12_c).collect();
        let w: Vec<f64> = run.traj.records.iter().map(|r| denoise(r.w12_w_minus_1)).collect();
        let p: Vec<f64> = run.traj.records.iter().map(|r| denoise(r.linf_p_minus_1)).collect();
        Ok((
            diagnostics::fit_decay_rate(&times, &c, window)?,
            diagnostics::fit_decay_rate(&times, &w, window)?,
            diagnostics::fit_decay_rate(&times, &p, window)?,
        ))
    };

    let run1 = ctx.thm2_g1()?;
    let (fc, fw, fp) = fit3(run1)?;
    check(fc.rate >= 0.9, &format!("gamma=1: rate(c W12) {:.3} < 0.9", fc.rate), &mut failures);
    check(fw.rate >= 0.9, &format!("gamma=1: rate(w-1 W12) {:.3} < 0.9", fw.rate), &mut failures);
    check(fp.rate >= 0.85, &format!("gamma=1: rate(p-1 Linf) {:.3} < 0.85", fp.rate), &mut failures);
    for (label, f) in [("c", &fc), ("w", &fw), ("p", &fp)] {
        check(f.r_squared >= 0.98, &format!("gamma=1: r^2({label}) {:.4} < 0.98", f.r_squared), &mut failures);
    }

    let run2 = ctx.thm2_g05()?;
    let (_, fw2, fp2) = fit3(run2)?;
    check(fw2.rate >= 0.9 * 0.5, &format!("gamma=0.5: rate(w-1 W12) {:.3} < 0.45", fw2.rate), &mut failures);
    check(fp2.rate >= 0.85 * 0.5, &format!("gamma=0.5: rate(p-1 Linf) {:.3} < 0.425", fp2.rate), &mut failures);
    check(fw2.r_squared >= 0.98, &format!("gamma=0.5: r^2(w) {:.4} < 0.98", fw2.r_squared), &mut failures);
    check(fp2.r_squared >= 0.98, &format!("gamma=0.5: r^2(p) {:.4} < 0.98", fp2.r_squared), &mut failures);

    Ok(result(
        "C6",
        "exponential decay rates (1D)",
        failures,
        format!(
            "gamma=1: rate(c)={:.2} rate(w)={:.2} rate(p)={:.2}; gamma=0.5: rate(w)={:.2} rate(p)={:.2} (window [20,40])",
            fc.rate, fw.rate, fp.rate, fw2.rate, fp2.rate
        ),
    ))
}

fn c7_mean_ode(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    // the residual envelope decays with the solution; past t ~ 20 it sits
    // below the arithmetic noise of the mean (~1e-12), so the halving
    // comparison is made where the signal is resolved
    let window = (5.0, 15.0);
    let max_res = |run: &RunOutput, lambda: f64| -> Result<f64, HarnessError> {
        let res = diagnostics::mean_ode_residual(&run.traj.records, lambda, run.grid.measure())?;
        Ok(res
            .iter()
            .filter(|(t, _)| *t >= window.0 && *t <= window.1)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max))
    };
    let base = max_res(ctx.thm2_g1()?, 1.0)?;
    let halved = max_res(ctx.thm2_g1_half()?, 1.0)?;
    let factor = base / halved.max(1e-300);
    check(factor >= 3.0, &format!("residual factor {factor:.2} < 3 under cadence+dt halving"), &mut failures);
    Ok(result(
        "C7",
        "mean-value ODE residual",
        failures,
        format!("in-window max residual {base:.3e} -> {halved:.3e}, factor {factor:.2} (cadence and dt halved)"),
    ))
}

fn c8_semigroup() -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let grid = Grid::new_1d(1.0, 128)?;
    let taus = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];

    // single-mode decay exactness
    let f1 = Field::from_fn(&grid, |x, _| (PI * x).cos());
    let e1 = semigroup::to_expansion(&f1, &grid)?;
    let mut worst_mode = 0.0f64;
    for &tau in &taus {
        let u = semigroup::from_expansion(&semigroup::heat_apply(&e1, tau), &grid)?;
        let ratio = semigroup::lp_norm(&u, &grid, f64::INFINITY) / semigroup::lp_norm(&f1, &grid, f64::INFINITY);
        worst_mode = worst_mode.max((ratio - (-semigroup::lambda1(1.0) * tau).exp()).abs());
    }
    check(worst_mode <= 1e-10, &format!("single-mode factor error {worst_mode:.2e} > 1e-10"), &mut failures);

    // semigroup law in coefficients
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut coeffs = vec![0.0; 17];
    for a in coeffs.iter_mut().skip(1) {
        *a = 2.0 * xorshift_unit(&mut state) - 1.0;
    }
    let e = semigroup::CosineExpansion { length: 1.0, coeffs };
    let law_ab = semigroup::heat_apply(&semigroup::heat_apply(&e, 0.4), 1.1);
    let law_once = semigroup::heat_apply(&e, 1.5);
    let mut worst_law = 0.0f64;
    for (a, b) in law_ab.coeffs.iter().zip(&law_once.coeffs) {
        worst_law = worst_law.max((a - b).abs());
    }
    check(worst_law <= 1e-12, &format!("semigroup law gap {worst_law:.2e} > 1e-12"), &mut failures);

    // random mean-zero 16-band field: finite empirical constants, monotone L2
    let phi = semigroup::from_expansion(&e, &grid)?;
    let report = semigroup::verify_decay_estimates(&phi, &grid, &taus, f64::INFINITY, 2.0)?;
    check(report.k1_empirical.is_finite(), "empirical k1 not finite", &mut failures);
    check(report.k2_empirical.is_finite(), "empirical k2 not finite", &mut failures);
    check(report.l2_monotone, "L2 norm not nonincreasing in tau", &mut failures);

    Ok(result(
        "C8",
        "Neumann heat semigroup estimates",
        failures,
        format!(
            "single-mode exact to {worst_mode:.1e}, semigroup law to {worst_law:.1e}, empirical k1 = {:.3}, k2 = {:.3}",
            report.k1_empirical, report.k2_empirical
        ),
    ))
}

fn c9_variation_of_constants(ctx: &mut Ctx) -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let horizon = 2.0;
    let mut gaps = Vec::new();
    for &(dt, cad) in &VOC_LEVELS {
        let run = ctx.voc(dt, cad)?;
        let params = variation_of_constants_1d(dt, cad).params;
        let snaps: Vec<(f64, Field, Field)> =
            run.traj.snapshots.iter().map(|(t, s)| (*t, s.p.clone(), s.c.clone())).collect();
        let c_final = run
            .traj
            .snapshots
            .iter()
            .find(|(t, _)| (*t - horizon).abs() < 1e-6)
            .map(|(_, s)| s.c.clone())
            .ok_or_else(|| HarnessError::Scenario("missing final snapshot".to_string()))?;
        let c0 = &run.state0.c;
        let rec = semigroup::variation_of_constants_c(&snaps, c0, horizon, &params, &run.grid)?;
        let mut gap_sq = 0.0;
        for k in 0..run.grid.n_cells() {
            gap_sq += (rec.data()[k] - c_final.data()[k]).powi(2);
        }
        gaps.push((gap_sq * run.grid.cell_volume()).sqrt());
    }
    let order = fitted_order(&gaps);
    check(order >= 0.9, &format!("order {order:.2} < 0.9"), &mut failures);
    Ok(result(
        "C9",
        "variation-of-constants consistency for c",
        failures,
        format!("L2 gap {:.3e} -> {:.3e} -> {:.3e} under (dt, snapshot cadence) halving, order {order:.2}", gaps[0], gaps[1], gaps[2]),
    ))
}

struct Manufactured {
    p_amp: f64,
    c_base: f64,
    c_amp: f64,
    w_amp: f64,
}

impl Manufactured {
    fn state(&self, grid: &Grid) -> State {
        let p = Field::from_fn(grid, |x, _| 1.0 + self.p_amp * (PI * x).cos());
        let c = Field::from_fn(grid, |x, _| self.c_base + self.c_amp * (PI * x).cos());
        let w = Field::from_fn(grid, |x, _| 1.0 + self.w_amp * (PI * x).cos());
        State::new(grid, p, c, w).unwrap()
    }

    fn p(&self, x: f64) -> f64 {
        1.0 + self.p_amp * (PI * x).cos()
    }

    fn c(&self, x: f64) -> f64 {
        self.c_base + self.c_amp * (PI * x).cos()
    }

    /// d(p v)/dx for v = alpha/(1+c) c' + rho w'
    ///           = -pi sin(pi x) [alpha c_amp/(1+c) + rho w_amp],
    /// by the product and chain rules
    fn div_pv(&self, x: f64, params: &Params) -> f64 {
        let s = (PI * x).sin();
        let cos = (PI * x).cos();
        let g = params.alpha * self.c_amp / (1.0 + self.c(x)) + params.rho * self.w_amp;
        let g_prime = params.alpha * self.c_amp * self.c_amp * PI * s / (1.0 + self.c(x)).powi(2);
        let v = -PI * s * g;
        let v_prime = -PI * PI * cos * g - PI * s * g_prime;
        let p_prime = -self.p_amp * PI * s;
        p_prime * v + self.p(x) * v_prime
    }

    fn lap_p(&self, x: f64) -> f64 {
        -self.p_amp * PI * PI * (PI * x).cos()
    }

    fn lap_c(&self, x: f64) -> f64 {
        -self.c_amp * PI * PI * (PI * x).cos()
    }
}

fn c10_consistency() -> Result<CriterionResult, HarnessError> {
    let mut failures = Vec::new();
    let params = Params::default();
    let mf = Manufactured { p_amp: 0.5, c_base: 0.4, c_amp: 0.3, w_amp: 0.25 };

    let mut diff_p = Vec::new();
    let mut diff_c = Vec::new();
    let mut transport = Vec::new();
    for cells in [32usize, 64, 128] {
        let grid = Grid::new_1d(1.0, cells)?;
        let state = mf.state(&grid);

        // diffusion/reaction residual of the p- and c-equations (reactions
        // are exact at cell centers, so these expose the stencil error)
        let lap_p = ops::laplacian_neumann(&state.p, &grid);
        let lap_c = ops::laplacian_neumann(&state.c, &grid);
        let mut e_p = 0.0f64;
        let mut e_c = 0.0f64;
        for i in 0..cells {
            let x = grid.x_center(i);
            let p = state.p.at(i, 0);
            let c = state.c.at(i, 0);
            let num_p = lap_p.at(i, 0) + params.lambda * p * (1.0 - p);
            let exact_p = mf.lap_p(x) + params.lambda * p * (1.0 - p);
            e_p = e_p.max((num_p - exact_p).abs());
            let num_c = lap_c.at(i, 0) - c - params.mu * p * c;
            let exact_c = mf.lap_c(x) - c - params.mu * p * c;
            e_c = e_c.max((num_c - exact_c).abs());
        }
        diff_p.push(e_p);
        diff_c.push(e_c);

        // upwind transport residual against the analytic divergence
        let vel = ops::chemo_hapto_velocity(&state, &params, &grid);
        let div = ops::divergence(&ops::advective_flux_upwind(&state.p, &vel, &grid), &grid);
        let mut e_t = 0.0f64;
        for i in 0..cells {
            let x = grid.x_center(i);
            e_t = e_t.max((div.at(i, 0) - mf.div_pv(x, &params)).abs());
        }
        transport.push(e_t);
    }

    let order_p = fitted_order(&diff_p);
    let order_c = fitted_order(&diff_c);
    let order_t = fitted_order(&transport);
    check(order_p >= 1.9, &format!("p diffusion order {order_p:.2} < 1.9"), &mut failures);
    check(order_c >= 1.9, &format!("c diffusion order {order_c:.2} < 1.9"), &mut failures);
    check(order_t >= 0.9, &format!("transport order {order_t:.2} < 0.9"), &mut failures);
    Ok(result(
        "C10",
        "discretization consistency orders",
        failures,
        format!("diffusion/reaction orders {order_p:.2} (p), {order_c:.2} (c); upwind transport order {order_t:.2} over 32 -> 64 -> 128"),
    ))
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, &'static str, fn(&mut Ctx) -> Result<CriterionResult, HarnessError>);

const CRITERIA: [Criterion; 10] = [
    ("C1", "equilibrium fidelity (1,0,1)", c1_equilibrium),
    ("C2", "homogeneous-ODE oracle equivalence", c2_homogeneous),
    ("C3", "a-priori bound monitors", c3_monitors),
    ("C4", "Lyapunov identity dF/dt = G", c4_lyapunov_identity),
    ("C5", "dissipation inequality structure", c5_dissipation_structure),
    ("C6", "exponential decay rates (1D)", c6_decay_rates),
    ("C7", "mean-value ODE residual", c7_mean_ode),
    ("C8", "Neumann heat semigroup estimates", |_| c8_semigroup()),
    ("C9", "variation-of-constants consistency for c", c9_variation_of_constants),
    ("C10", "discretization consistency orders", |_| c10_consistency()),
];

/// Run the acceptance criteria, optionally filtered by a substring of the
/// id or name. Results come back in criterion order.
pub fn run_all(filter: Option<&str>) -> Vec<CriterionResult> {
    let mut ctx = Ctx::default();
    let mut out = Vec::new();
    for (id, name, f) in CRITERIA {
        if let Some(pat) = filter {
            let pat = pat.to_lowercase();
            if !id.to_lowercase().contains(&pat) && !name.to_lowercase().contains(&pat) {
                continue;
            }
        }
        let res = match f(&mut ctx) {
            Ok(r) => r,
            Err(e) => error_result(id, name, e),
        };
        out.push(res);
    }
    out
}
