//! Turn a Config into grid + initial state, run it, and write artifacts.

use crate::config::{Config, InitFamily};
use crate::error::HarnessError;
use crate::output;
use angio_core::diagnostics::{self, KappaChoice, MonitorSlacks, Violation};
use angio_core::stepper::{self, Observer, StepConfig, Trajectory};
use angio_core::{validate_initial_data, Field, Grid, InitialReport, Params, State};
use std::path::{Path, PathBuf};

/// A run that has already happened, kept in memory for the checks.
pub struct RunOutput {
    pub grid: Grid,
    pub state0: State,
    pub traj: Trajectory,
    pub kappa: KappaChoice,
    pub initial_report: InitialReport,
    pub dt_used: f64,
    pub warnings: Vec<String>,
}

pub fn build_grid(cfg: &Config) -> Result<Grid, HarnessError> {
    let g = if cfg.grid.dim == 1 {
        Grid::new_1d(cfg.grid.lengths[0], cfg.grid.cells[0])?
    } else {
        Grid::new_2d(cfg.grid.lengths[0], cfg.grid.lengths[1], cfg.grid.cells[0], cfg.grid.cells[1])?
    };
    Ok(g)
}

/// Sample the configured closed-form family at cell centers.
pub fn build_initial_state(cfg: &Config, grid: &Grid) -> Result<(State, Vec<String>), HarnessError> {
    let mut warnings = Vec::new();
    let init = &cfg.init;
    let (lx, ly) = (grid.lx(), grid.ly());
    let dim = grid.dim();
    let mode = init.mode as f64;

    let shape: Box<dyn Fn(f64, f64) -> f64> = match init.family {
        InitFamily::Constant => Box::new(|_, _| 0.0),
        InitFamily::CosineBump => Box::new(move |x, y| {
            let mut v = (mode * std::f64::consts::PI * x / lx).cos();
            if dim == 2 {
                v *= (mode * std::f64::consts::PI * y / ly).cos();
            }
            v
        }),
        InitFamily::OffsetGaussianClamped => {
            warnings.push(
                "offset-gaussian-clamped data only satisfies the no-flux compatibility condition approximately"
                    .to_string(),
            );
            let sigma = lx / 8.0;
            Box::new(move |x, y| {
                let mut r2 = (x - 0.5 * lx).powi(2);
                if dim == 2 {
                    r2 += (y - 0.5 * ly).powi(2);
                }
                (-r2 / (2.0 * sigma * sigma)).exp()
            })
        }
    };

    let sample = |base: f64, amp: f64| Field::from_fn(grid, |x, y| (base + amp * shape(x, y)).max(0.0));
    let p = sample(init.p_base, init.p_amp);
    let c = sample(init.c_base, init.c_amp);
    let w = sample(init.w_base, init.w_amp);
    let state = State::new(grid, p, c, w)?;
    Ok((state, warnings))
}

/// Fixed step size for the run: the configured dt, or the CFL-stable step of
/// the initial state. Either way it is shrunk to the nearest divisor of the
/// record cadence so records land exactly on the cadence grid.
pub fn resolve_dt(cfg: &Config, state: &State, params: &Params, grid: &Grid) -> f64 {
    let raw = cfg.step.dt.unwrap_or_else(|| {
        stepper::stable_dt(state, params, grid, cfg.step.cfl_safety, cfg.step.max_dt)
    });
    let per_record = (cfg.cadence / raw).ceil().max(1.0);
    cfg.cadence / per_record
}

/// Run the configured scenario without touching the filesystem.
pub fn run_scenario_core(cfg: &Config) -> Result<RunOutput, HarnessError> {
    let grid = build_grid(cfg)?;
    let (state0, mut warnings) = build_initial_state(cfg, &grid)?;
    let params = cfg.params;
    params.validate()?;

    let initial_report = validate_initial_data(&state0, &params, &grid)?;
    if !initial_report.nonneg_ok {
        return Err(HarnessError::Scenario(format!(
            "initial data violates nonnegativity: {}",
            initial_report.details.join("; ")
        )));
    }
    if !initial_report.p0_nonzero_ok {
        return Err(HarnessError::Scenario("initial p is identically zero".to_string()));
    }
    let kappa = diagnostics::choose_kappa(&params, &state0.w);
    if !kappa.valid {
        warnings.push(format!(
            "min w0 = {} does not exceed 1 - 1/rho; Lyapunov diagnostics use kappa = 0",
            initial_report.min_w0
        ));
    }

    let dt = resolve_dt(cfg, &state0, &params, &grid);
    let step_cfg = StepConfig {
        dt,
        theta: cfg.step.theta,
        positivity_floor: cfg.step.positivity_floor,
        cfl_safety: cfg.step.cfl_safety,
        max_dt: cfg.step.max_dt,
    };
    let observer = Observer {
        cadence: cfg.cadence,
        kappa: if kappa.valid { kappa.kappa } else { 0.0 },
        lr: cfg.lr.clone(),
        snapshot_times: cfg.snapshots.clone(),
    };
    let traj = stepper::run(&state0, &params, &grid, &step_cfg, cfg.horizon, &observer)?;

    Ok(RunOutput { grid, state0, traj, kappa, initial_report, dt_used: dt, warnings })
}

/// Monitor verdict for a finished run.
pub fn monitor_violations(run: &RunOutput, params: &Params) -> Vec<Violation> {
    diagnostics::bound_monitors(
        &run.traj.records,
        &run.traj.terms,
        params,
        run.grid.measure(),
        &MonitorSlacks::default(),
    )
}

/// Everything `run` produces on disk plus the pass/fail verdict.
pub struct ScenarioOutcome {
    pub run: RunOutput,
    pub violations: Vec<Violation>,
    pub csv_path: PathBuf,
    pub snapshot_paths: Vec<PathBuf>,
    pub passed: bool,
}

/// Full scenario execution: run, write diagnostics CSV and snapshots into
/// the output directory, evaluate the generic monitors (a-priori bounds and
/// zero positivity clips).
pub fn run_scenario(cfg: &Config, out_override: Option<&Path>) -> Result<ScenarioOutcome, HarnessError> {
    let run = run_scenario_core(cfg)?;
    let params = cfg.params;

    let out_dir = out_override.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    std::fs::create_dir_all(&out_dir)?;

    let csv_path = out_dir.join(format!("{}_diagnostics.csv", cfg.scenario));
    output::write_csv(&run.traj.records, &cfg.lr, &csv_path)?;

    let mut snapshot_paths = Vec::new();
    for (idx, (t, state)) in run.traj.snapshots.iter().enumerate() {
        let path = out_dir.join(format!("{}_snapshot_{idx}_t{t:?}.csv", cfg.scenario));
        output::write_snapshot(state, &run.grid, &path)?;
        snapshot_paths.push(path);
    }

    let violations = monitor_violations(&run, &params);
    let passed = violations.is_empty() && run.traj.total_clips == 0;
    Ok(ScenarioOutcome { run, violations, csv_path, snapshot_paths, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, GridSpec};

    fn equilibrium_cfg() -> Config {
        let mut cfg = Config::bare(
            "equilibrium",
            GridSpec { dim: 1, lengths: [1.0, 1.0], cells: [32, 1] },
            2.0,
        );
        cfg.cadence = 0.5;
        cfg
    }

    #[test]
    fn equilibrium_scenario_stays_at_rest() {
        let out = run_scenario_core(&equilibrium_cfg()).unwrap();
        assert_eq!(out.traj.total_clips, 0);
        for r in &out.traj.records {
            assert!(r.linf_p_minus_1 <= 1e-10);
            assert!(r.linf_c <= 1e-10);
        }
        assert!(monitor_violations(&out, &Params::default()).is_empty());
    }

    #[test]
    fn cosine_bump_respects_mean_and_positivity() {
        let mut cfg = equilibrium_cfg();
        cfg.init.family = InitFamily::CosineBump;
        cfg.init.p_amp = 0.2;
        cfg.init.c_base = 0.5;
        cfg.init.c_amp = 0.25;
        cfg.init.w_amp = -0.2;
        let grid = build_grid(&cfg).unwrap();
        let (s, warnings) = build_initial_state(&cfg, &grid).unwrap();
        assert!(warnings.is_empty());
        assert!(s.p.min() > 0.0);
        assert!((s.p.integral(&grid) - grid.measure()).abs() < 1e-12);
        assert!((s.w.max() - 1.2).abs() < 1e-2);
    }

    #[test]
    fn gaussian_family_warns_about_compatibility() {
        let mut cfg = equilibrium_cfg();
        cfg.init.family = InitFamily::OffsetGaussianClamped;
        cfg.init.c_amp = 0.5;
        let grid = build_grid(&cfg).unwrap();
        let (_, warnings) = build_initial_state(&cfg, &grid).unwrap();
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn zero_p0_is_rejected() {
        let mut cfg = equilibrium_cfg();
        cfg.init.p_base = 0.0;
        assert!(matches!(run_scenario_core(&cfg), Err(HarnessError::Scenario(_))));
    }

    #[test]
    fn resolve_dt_divides_cadence() {
        let cfg = equilibrium_cfg();
        let grid = build_grid(&cfg).unwrap();
        let (s, _) = build_initial_state(&cfg, &grid).unwrap();
        let dt = resolve_dt(&cfg, &s, &cfg.params, &grid);
        let ratio = cfg.cadence / dt;
        assert!((ratio - ratio.round()).abs() < 1e-9);
        assert!(dt <= cfg.step.max_dt + 1e-15);
    }

    #[test]
    fn scenario_outputs_are_deterministic() {
        let text = "scenario = det\ngrid.dim = 1\ngrid.cells = 24\ngrid.length = 1.0\nhorizon = 0.5\n\
                    cadence = 0.1\ninit.family = cosine-bump\ninit.p_amp = 0.2\ninit.c_base = 0.5\n\
                    init.c_amp = 0.2\ninit.w_amp = -0.1\nsnapshots = 0.0, 0.5\n";
        let cfg = parse_config(text).unwrap();
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let o1 = run_scenario(&cfg, Some(d1.path())).unwrap();
        let o2 = run_scenario(&cfg, Some(d2.path())).unwrap();
        assert!(o1.passed && o2.passed);
        let b1 = std::fs::read(&o1.csv_path).unwrap();
        let b2 = std::fs::read(&o2.csv_path).unwrap();
        assert_eq!(b1, b2, "diagnostics CSV must be bit-identical");
        assert_eq!(o1.snapshot_paths.len(), 2);
        let s1 = std::fs::read(&o1.snapshot_paths[1]).unwrap();
        let s2 = std::fs::read(&o2.snapshot_paths[1]).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn snapshot_at_zero_reproduces_the_formula() {
        let text = "scenario = s0\ngrid.dim = 1\ngrid.cells = 16\ngrid.length = 1.0\nhorizon = 0.2\n\
                    cadence = 0.1\ninit.family = cosine-bump\ninit.p_amp = 0.3\nsnapshots = 0.0\n";
        let cfg = parse_config(text).unwrap();
        let out = run_scenario_core(&cfg).unwrap();
        let grid = &out.grid;
        let (t0, snap) = &out.traj.snapshots[0];
        assert_eq!(*t0, 0.0);
        for i in 0..grid.nx() {
            let x = grid.x_center(i);
            let expect = 1.0 + 0.3 * (std::f64::consts::PI * x).cos();
            assert!((snap.p.at(i, 0) - expect).abs() <= 1e-12);
        }
    }
}
