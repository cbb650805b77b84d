use angio_core::semigroup;
use angio_core::{Field, Grid, Params};
use angio_harness::oracle::{self, OdeState};
use angio_harness::{parse_config, scenario, suite};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "angiosim", about = "Chemotaxis-haptotaxis angiogenesis simulator and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a config file and write its artifacts
    Run {
        /// path to a `section.key = value` config file
        #[arg(long)]
        config: PathBuf,
        /// output directory (overrides the config's output_dir)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance scenarios and print one verdict line each
    Suite {
        /// only criteria whose id or name contains this substring
        #[arg(long)]
        filter: Option<String>,
    },
    /// Print the homogeneous-ODE reference series as CSV
    Oracle {
        #[arg(long, default_value_t = 0.5)]
        p0: f64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        #[arg(long, default_value_t = 0.8)]
        w0: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// horizon
        #[arg(short = 'T', long = "horizon")]
        horizon: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// print every k-th state
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Verify the spectral semigroup estimates on (0, L)
    SemigroupCheck {
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        /// band limit of the random test field
        #[arg(long, default_value_t = 16)]
        modes: usize,
        #[arg(long, default_value_t = 256)]
        cells: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = parse_config(&text)?;
            let outcome = scenario::run_scenario(&cfg, out.as_deref())?;
            for w in &outcome.run.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "scenario `{}`: {} records, dt = {}, kappa valid = {}, clips = {}",
                cfg.scenario,
                outcome.run.traj.records.len(),
                outcome.run.dt_used,
                outcome.run.kappa.valid,
                outcome.run.traj.total_clips
            );
            println!("diagnostics: {}", outcome.csv_path.display());
            for p in &outcome.snapshot_paths {
                println!("snapshot:    {}", p.display());
            }
            if outcome.violations.is_empty() {
                println!("monitors: all bounds hold");
            } else {
                for v in &outcome.violations {
                    println!(
                        "monitor violation: {} at t = {} (value {:.6e}, bound {:.6e})",
                        v.monitor, v.t, v.value, v.bound
                    );
                }
            }

            // informational tail rates over the configured fit window; the
            // deviation-from-1 series use the suite's noise floor
            let window = (cfg.fit.window_lo * cfg.horizon, cfg.fit.window_hi * cfg.horizon);
            let times: Vec<f64> = outcome.run.traj.records.iter().map(|r| r.t).collect();
            let floor = suite::DEVIATION_NOISE_FLOOR;
            let denoise = |v: f64| if v > floor { v } else { 0.0 };
            for (label, series) in [
                ("||c||_W12", outcome.run.traj.records.iter().map(|r| r.w12_c).collect::<Vec<_>>()),
                ("||w-1||_W12", outcome.run.traj.records.iter().map(|r| denoise(r.w12_w_minus_1)).collect()),
                ("||p-1||_Linf", outcome.run.traj.records.iter().map(|r| denoise(r.linf_p_minus_1)).collect()),
            ] {
                match angio_core::diagnostics::fit_decay_rate(&times, &series, window) {
                    Ok(fit) => println!(
                        "tail rate {label}: {:.4} (r^2 = {:.4}, window [{:.2}, {:.2}])",
                        fit.rate, fit.r_squared, window.0, window.1
                    ),
                    Err(_) => println!("tail rate {label}: n/a (too few positive in-window samples)"),
                }
            }
            Ok(outcome.passed)
        }
        Command::Suite { filter } => {
            let results = suite::run_all(filter.as_deref());
            if results.is_empty() {
                eprintln!("no criteria match the filter");
                return Ok(false);
            }
            let mut all_ok = true;
            for r in &results {
                println!("{}", r.line());
                all_ok &= r.passed;
            }
            println!("{}/{} criteria passed", results.iter().filter(|r| r.passed).count(), results.len());
            Ok(all_ok)
        }
        Command::Oracle { p0, c0, w0, alpha, rho, lambda, mu, gamma, horizon, dt, every } => {
            let params = Params::new(alpha, rho, lambda, mu, gamma)?;
            let trace = oracle::ode_oracle(&params, OdeState::new(p0, c0, w0), horizon, dt)?;
            println!("t,p,c,w");
            for (i, s) in trace.iter().enumerate() {
                if i % every.max(1) == 0 || i == trace.len() - 1 {
                    println!("{:?},{:?},{:?},{:?}", s.t, s.p, s.c, s.w);
                }
            }
            Ok(true)
        }
        Command::SemigroupCheck { length, modes, cells } => {
            let grid = Grid::new_1d(length, cells)?;
            let taus = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];

            // deterministic band-limited test field, mean zero
            let mut coeffs = vec![0.0; modes + 1];
            let mut state = 0x9E37_79B9_7F4A_7C15u64;
            for a in coeffs.iter_mut().skip(1) {
                state ^= state >> 12;
                state ^= state << 25;
                state ^= state >> 27;
                *a = 2.0 * ((state.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 11) as f64 / (1u64 << 53) as f64) - 1.0;
            }
            let exp = semigroup::CosineExpansion { length, coeffs };
            let phi = semigroup::from_expansion(&exp, &grid)?;
            let report = semigroup::verify_decay_estimates(&phi, &grid, &taus, f64::INFINITY, 2.0)?;

            println!("lambda1 = {:.6}", semigroup::lambda1(length));
            println!("tau, norm_ratio, grad_ratio, l2");
            for row in &report.rows {
                println!("{:.3}, {:.6e}, {:.6e}, {:.6e}", row.tau, row.norm_ratio, row.grad_ratio, row.l2);
            }
            println!(
                "empirical k1 = {:.6}, k2 = {:.6}, L2 monotone = {}",
                report.k1_empirical, report.k2_empirical, report.l2_monotone
            );

            // single-mode exactness
            let f1 = Field::from_fn(&grid, |x, _| (std::f64::consts::PI * x / length).cos());
            let e1 = semigroup::to_expansion(&f1, &grid)?;
            let mut worst = 0.0f64;
            for &tau in &taus {
                let u = semigroup::from_expansion(&semigroup::heat_apply(&e1, tau), &grid)?;
                let ratio =
                    semigroup::lp_norm(&u, &grid, f64::INFINITY) / semigroup::lp_norm(&f1, &grid, f64::INFINITY);
                worst = worst.max((ratio - (-semigroup::lambda1(length) * tau).exp()).abs());
            }
            println!("single-mode decay factor error = {worst:.3e}");

            Ok(report.passes() && worst <= 1e-10)
        }
    }
}
