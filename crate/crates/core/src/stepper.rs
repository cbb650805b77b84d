//! Time integration: first-order operator splitting with an exact
//! exponential update for w, explicit upwind transport and reactions, and
//! implicit theta-scheme diffusion (tridiagonal in 1D, ADI sweeps in 2D).
//!
//! Per step, in order:
//!   1. w  <- 1 + (w - 1) exp(-gamma p dt)        (p frozen over the step)
//!   2. p  <- p + dt (-div(p v) + lambda p (1-p)) (explicit)
//!      c  <- c + dt (-mu p c)                    (explicit)
//!   3. p  <- theta-scheme diffusion solve
//!      c  <- theta-scheme solve of c_t = lap c - c (decay inside the solve)
//!
//! Step 1 keeps w in [min(w0,1), max(w0,1)] per cell exactly and never lets
//! (w - 1) change sign; step 3 with theta = 1 obeys the discrete maximum
//! principle for c.

use crate::diagnostics::{self, DiagRecord, DissipationTerms};
use crate::error::SimError;
use crate::field::Field;
use crate::grid::Grid;
use crate::ops;
use crate::params::Params;
use crate::state::State;
use crate::tridiag::theta_diffusion_step;

#[derive(Debug, Clone, Copy)]
pub struct StepConfig {
    /// fixed time step
    pub dt: f64,
    /// implicitness of diffusion: 1 = backward Euler, 0.5 = Crank-Nicolson
    pub theta: f64,
    /// values below this are clipped up to it, with the clip counted
    pub positivity_floor: f64,
    /// fraction of the transport CFL limit used by stable_dt
    pub cfl_safety: f64,
    /// cap returned by stable_dt when transport and reactions do not bind
    pub max_dt: f64,
}

impl StepConfig {
    pub fn new(dt: f64) -> Result<Self, SimError> {
        let cfg = StepConfig { dt, ..StepConfig::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > 0.0) {
            return Err(SimError::Invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(0.5..=1.0).contains(&self.theta) {
            return Err(SimError::Invalid(format!("theta must lie in [0.5, 1], got {}", self.theta)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return Err(SimError::Invalid(format!("cfl_safety must lie in (0, 1), got {}", self.cfl_safety)));
        }
        if self.positivity_floor < 0.0 {
            return Err(SimError::Invalid("positivity_floor must be nonnegative".to_string()));
        }
        if !(self.max_dt > 0.0) {
            return Err(SimError::Invalid("max_dt must be positive".to_string()));
        }
        Ok(())
    }
}

impl Default for StepConfig {
    fn default() -> Self {
        // cfl_safety below 1/2 makes the 1D two-face upwind update provably
        // monotone; the reaction caps live in stable_dt
        StepConfig { dt: 1e-3, theta: 1.0, positivity_floor: 0.0, cfl_safety: 0.45, max_dt: 0.05 }
    }
}

/// What one step did.
#[derive(Debug, Clone, Copy)]
pub struct StepReport {
    pub t_new: f64,
    /// minimum of p after the solve, before any clipping
    pub min_p: f64,
    /// cells (p or c) raised to the positivity floor this step
    pub negative_clips: usize,
    /// diffusion is solved directly (Thomas / ADI), no iteration count
    pub direct_solve: bool,
}

/// Largest stable time step for the explicit parts: cfl_safety times the
/// tightest face crossing time, further capped by the explicit reaction
/// scales 1/(2 lambda max(p,1)) and 1/(2 mu max(p,1)), and by max_dt when
/// nothing binds (all velocities zero).
pub fn stable_dt(state: &State, params: &Params, grid: &Grid, cfl_safety: f64, max_dt: f64) -> f64 {
    let vel = ops::chemo_hapto_velocity(state, params, grid);
    let mut dt = f64::INFINITY;
    for &v in &vel.x {
        if v != 0.0 {
            dt = dt.min(grid.dx() / v.abs());
        }
    }
    for &v in &vel.y {
        if v != 0.0 {
            dt = dt.min(grid.dy() / v.abs());
        }
    }
    dt *= cfl_safety;

    let p_scale = state.p.max().max(1.0);
    dt = dt.min(1.0 / (2.0 * params.lambda * p_scale));
    dt = dt.min(1.0 / (2.0 * params.mu * p_scale));
    dt.min(max_dt)
}

/// Exact per-cell exponential update of w over one step with p frozen:
/// w_new = 1 + (w - 1) exp(-gamma p dt).
pub fn step_w_exact(state: &State, params: &Params, dt: f64) -> Field {
    let mut w = state.w.clone();
    for (k, v) in w.data_mut().iter_mut().enumerate() {
        let decay = (-params.gamma * state.p.data()[k] * dt).exp();
        *v = 1.0 + (*v - 1.0) * decay;
    }
    w
}

/// Advance the state by cfg.dt.
pub fn step(state: &State, params: &Params, grid: &Grid, cfg: &StepConfig) -> Result<(State, StepReport), SimError> {
    let dt = cfg.dt;

    // (1) exact w update
    let w_new = step_w_exact(state, params, dt);
    let mid = State { p: state.p.clone(), c: state.c.clone(), w: w_new, t: state.t };

    // (2) explicit transport + reaction
    let (dp, dc) = ops::explicit_rhs(&mid, params, grid);
    let mut p_star = mid.p;
    let mut c_star = mid.c;
    for (k, v) in p_star.data_mut().iter_mut().enumerate() {
        *v += dt * dp.data()[k];
    }
    for (k, v) in c_star.data_mut().iter_mut().enumerate() {
        *v += dt * dc.data()[k];
    }

    // (3) implicit diffusion; the -c decay sits inside the c-solve
    let p_new = theta_diffusion_step(&p_star, grid, dt, cfg.theta, 0.0)?;
    let c_new = theta_diffusion_step(&c_star, grid, dt, cfg.theta, 1.0)?;

    let mut out = State { p: p_new, c: c_new, w: mid.w, t: state.t + dt };

    let min_p = out.p.min();
    let mut clips = 0usize;
    for f in [&mut out.p, &mut out.c] {
        for v in f.data_mut() {
            if *v < cfg.positivity_floor {
                *v = cfg.positivity_floor;
                clips += 1;
            }
        }
    }

    for (f, name) in [(&out.p, "p"), (&out.c, "c"), (&out.w, "w")] {
        if !f.is_finite() {
            return Err(SimError::Diverged { field: name, t: out.t });
        }
    }

    let report = StepReport { t_new: out.t, min_p, negative_clips: clips, direct_solve: true };
    Ok((out, report))
}

/// What run() observes along the way.
#[derive(Debug, Clone)]
pub struct Observer {
    /// time between diagnostic records
    pub cadence: f64,
    /// kappa used inside F and G
    pub kappa: f64,
    /// extra L^r norms of p - 1 to record
    pub lr: Vec<u32>,
    /// times at which full field snapshots are kept
    pub snapshot_times: Vec<f64>,
}

impl Observer {
    pub fn new(cadence: f64, kappa: f64) -> Self {
        Observer { cadence, kappa, lr: vec![4], snapshot_times: Vec::new() }
    }
}

/// A completed run: diagnostics at the observer cadence, the dissipation
/// integrals next to each record, any requested snapshots, and the step
/// aggregates the acceptance checks need.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<DiagRecord>,
    pub terms: Vec<DissipationTerms>,
    pub snapshots: Vec<(f64, State)>,
    pub total_clips: usize,
    pub min_p_over_run: f64,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }
}

/// Step from state0 to the horizon, recording at the observer cadence.
/// The final step is shortened to land exactly on the horizon. Deterministic
/// for identical inputs.
pub fn run(
    state0: &State,
    params: &Params,
    grid: &Grid,
    cfg: &StepConfig,
    horizon: f64,
    observer: &Observer,
) -> Result<Trajectory, SimError> {
    cfg.validate()?;
    if horizon < 0.0 {
        return Err(SimError::Invalid(format!("horizon must be nonnegative, got {horizon}")));
    }
    if !(observer.cadence > 0.0) {
        return Err(SimError::Invalid(format!("record cadence must be positive, got {}", observer.cadence)));
    }

    let mut state = state0.clone();
    let mut traj = Trajectory {
        records: Vec::new(),
        terms: Vec::new(),
        snapshots: Vec::new(),
        total_clips: 0,
        min_p_over_run: state.p.min(),
    };

    let tol = 1e-9 * cfg.dt.min(observer.cadence);
    let observe = |state: &State, traj: &mut Trajectory| {
        traj.records.push(diagnostics::record(state, params, grid, observer.kappa, &observer.lr));
        traj.terms.push(diagnostics::dissipation_terms(state, params, grid));
    };

    observe(&state, &mut traj);
    let mut snap_times = observer.snapshot_times.clone();
    snap_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut snap_idx = 0;
    while snap_idx < snap_times.len() && snap_times[snap_idx] <= state.t + tol {
        traj.snapshots.push((state.t, state.clone()));
        snap_idx += 1;
    }

    // Times come from the step counter, not accumulation, so record points
    // at exact multiples of the cadence are hit reliably over long runs.
    let t0 = state.t;
    let n_steps = ((horizon - t0) / cfg.dt - 1e-9).ceil().max(0.0) as u64;
    let mut record_idx = 1u64;
    for n in 1..=n_steps {
        let t_prev = state.t;
        let t_next = (t0 + n as f64 * cfg.dt).min(horizon);
        let step_cfg = StepConfig { dt: t_next - t_prev, ..*cfg };
        let (mut new_state, report) = step(&state, params, grid, &step_cfg)
            .map_err(|e| attach_time(e, t_prev))?;
        new_state.t = t_next;
        state = new_state;
        traj.total_clips += report.negative_clips;
        traj.min_p_over_run = traj.min_p_over_run.min(report.min_p);

        loop {
            let t_rec = t0 + record_idx as f64 * observer.cadence;
            if t_rec > horizon + tol || state.t < t_rec - tol {
                break;
            }
            observe(&state, &mut traj);
            record_idx += 1;
        }
        while snap_idx < snap_times.len() && state.t >= snap_times[snap_idx] - tol {
            traj.snapshots.push((state.t, state.clone()));
            snap_idx += 1;
        }
    }

    // make sure the horizon itself is recorded
    if let Some(last) = traj.records.last() {
        if horizon > t0 && (horizon - last.t) > tol {
            observe(&state, &mut traj);
        }
    }

    Ok(traj)
}

fn attach_time(e: SimError, t: f64) -> SimError {
    match e {
        SimError::Solver(msg) => SimError::Solver(format!("at t = {t}: {msg}")),
        other => other,
    }
}
