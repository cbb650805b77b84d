//! Line-oriented `section.key = value` configuration format.
//!
//! Lines are independent; `#` starts a comment. Keys are dotted and fixed;
//! unknown keys are errors so typos cannot silently fall back to defaults.
//! Decimal values always use a point, never a locale separator.

use crate::error::HarnessError;
use angio_core::Params;

/// Closed-form initial-data families. All of them sample smooth expressions
/// at cell centers; `constant` and `cosine-bump` satisfy the no-flux
/// compatibility condition exactly, the clamped Gaussian only approximately
/// (building it emits a warning).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitFamily {
    Constant,
    CosineBump,
    OffsetGaussianClamped,
}

impl InitFamily {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "constant" => Some(InitFamily::Constant),
            "cosine-bump" => Some(InitFamily::CosineBump),
            "offset-gaussian-clamped" => Some(InitFamily::OffsetGaussianClamped),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub dim: usize,
    pub lengths: [f64; 2],
    pub cells: [usize; 2],
}

#[derive(Debug, Clone, Copy)]
pub struct InitSpec {
    pub family: InitFamily,
    pub p_base: f64,
    pub p_amp: f64,
    pub c_base: f64,
    pub c_amp: f64,
    pub w_base: f64,
    pub w_amp: f64,
    /// cosine mode index k of the bump family
    pub mode: u32,
}

impl Default for InitSpec {
    fn default() -> Self {
        InitSpec {
            family: InitFamily::Constant,
            p_base: 1.0,
            p_amp: 0.0,
            c_base: 0.0,
            c_amp: 0.0,
            w_base: 1.0,
            w_amp: 0.0,
            mode: 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StepSpec {
    /// None means auto: the CFL-stable step of the initial state, aligned to
    /// the record cadence
    pub dt: Option<f64>,
    pub theta: f64,
    pub cfl_safety: f64,
    pub max_dt: f64,
    pub positivity_floor: f64,
}

impl Default for StepSpec {
    fn default() -> Self {
        StepSpec { dt: None, theta: 1.0, cfl_safety: 0.45, max_dt: 0.05, positivity_floor: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitSpec {
    /// window start as a fraction of the horizon
    pub window_lo: f64,
    /// window end as a fraction of the horizon
    pub window_hi: f64,
}

impl Default for FitSpec {
    fn default() -> Self {
        FitSpec { window_lo: 0.5, window_hi: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub scenario: String,
    pub grid: GridSpec,
    pub params: Params,
    pub init: InitSpec,
    pub step: StepSpec,
    pub horizon: f64,
    pub cadence: f64,
    pub snapshots: Vec<f64>,
    pub output_dir: String,
    pub lr: Vec<u32>,
    pub fit: FitSpec,
}

impl Config {
    /// A fully defaulted config for programmatic scenario construction.
    pub fn bare(scenario: &str, grid: GridSpec, horizon: f64) -> Self {
        Config {
            scenario: scenario.to_string(),
            grid,
            params: Params::default(),
            init: InitSpec::default(),
            step: StepSpec::default(),
            horizon,
            cadence: 0.25,
            snapshots: Vec::new(),
            output_dir: "out".to_string(),
            lr: vec![4],
            fit: FitSpec::default(),
        }
    }
}

fn parse_f64(value: &str, line: usize, key: &str) -> Result<f64, HarnessError> {
    value.parse::<f64>().map_err(|_| HarnessError::Config {
        line,
        msg: format!("value `{value}` for key `{key}` is not a number"),
    })
}

fn parse_positive(value: &str, line: usize, key: &str) -> Result<f64, HarnessError> {
    let v = parse_f64(value, line, key)?;
    if !(v > 0.0) {
        return Err(HarnessError::Config { line, msg: format!("key `{key}` requires a positive value, got {v}") });
    }
    Ok(v)
}

fn parse_usize(value: &str, line: usize, key: &str) -> Result<usize, HarnessError> {
    value.parse::<usize>().map_err(|_| HarnessError::Config {
        line,
        msg: format!("value `{value}` for key `{key}` is not a nonnegative integer"),
    })
}

/// Parse the text form into a Config. Missing optional keys take the
/// documented defaults; the required keys are `scenario`, the grid block and
/// `horizon`.
pub fn parse_config(text: &str) -> Result<Config, HarnessError> {
    let mut scenario: Option<String> = None;
    let mut dim: Option<usize> = None;
    let mut length_x: Option<f64> = None;
    let mut length_y: Option<f64> = None;
    let mut cells_x: Option<usize> = None;
    let mut cells_y: Option<usize> = None;
    let mut horizon: Option<f64> = None;

    let mut params = Params::default();
    let mut init = InitSpec::default();
    let mut step = StepSpec::default();
    let mut fit = FitSpec::default();
    let mut cadence = 0.25_f64;
    let mut snapshots: Vec<f64> = Vec::new();
    let mut output_dir = "out".to_string();
    let mut lr: Vec<u32> = vec![4];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(HarnessError::Config { line, msg: format!("expected `key = value`, got `{content}`") });
        };
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(HarnessError::Config { line, msg: format!("key `{key}` has no value") });
        }

        match key {
            "scenario" => scenario = Some(value.to_string()),
            "horizon" => horizon = Some(parse_positive(value, line, key)?),
            "cadence" => cadence = parse_positive(value, line, key)?,
            "output_dir" => output_dir = value.to_string(),
            "snapshots" => {
                snapshots = value
                    .split(',')
                    .map(|s| parse_f64(s.trim(), line, key))
                    .collect::<Result<Vec<_>, _>>()?;
            }
            "lr" => {
                lr = value
                    .split(',')
                    .map(|s| {
                        s.trim().parse::<u32>().map_err(|_| HarnessError::Config {
                            line,
                            msg: format!("lr entries must be positive integers, got `{s}`"),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if lr.contains(&0) {
                    return Err(HarnessError::Config { line, msg: "lr entries must be >= 1".to_string() });
                }
            }

            "grid.dim" => {
                let d = parse_usize(value, line, key)?;
                if d != 1 && d != 2 {
                    return Err(HarnessError::Config { line, msg: format!("grid.dim must be 1 or 2, got {d}") });
                }
                dim = Some(d);
            }
            "grid.length" | "grid.length_x" => length_x = Some(parse_positive(value, line, key)?),
            "grid.length_y" => length_y = Some(parse_positive(value, line, key)?),
            "grid.cells" | "grid.cells_x" => cells_x = Some(parse_usize(value, line, key)?),
            "grid.cells_y" => cells_y = Some(parse_usize(value, line, key)?),

            "params.alpha" => params.alpha = parse_positive(value, line, key)?,
            "params.rho" => params.rho = parse_positive(value, line, key)?,
            "params.lambda" => params.lambda = parse_positive(value, line, key)?,
            "params.mu" => params.mu = parse_positive(value, line, key)?,
            "params.gamma" => params.gamma = parse_positive(value, line, key)?,

            "init.family" => {
                init.family = InitFamily::parse(value).ok_or_else(|| HarnessError::Config {
                    line,
                    msg: format!(
                        "unknown init.family `{value}` (expected constant, cosine-bump or offset-gaussian-clamped)"
                    ),
                })?;
            }
            "init.p_base" => init.p_base = parse_f64(value, line, key)?,
            "init.p_amp" => init.p_amp = parse_f64(value, line, key)?,
            "init.c_base" => init.c_base = parse_f64(value, line, key)?,
            "init.c_amp" => init.c_amp = parse_f64(value, line, key)?,
            "init.w_base" => init.w_base = parse_f64(value, line, key)?,
            "init.w_amp" => init.w_amp = parse_f64(value, line, key)?,
            "init.mode" => {
                init.mode = value.parse::<u32>().map_err(|_| HarnessError::Config {
                    line,
                    msg: format!("init.mode must be a positive integer, got `{value}`"),
                })?;
                if init.mode == 0 {
                    return Err(HarnessError::Config { line, msg: "init.mode must be >= 1".to_string() });
                }
            }

            "step.dt" => {
                step.dt = if value == "auto" { None } else { Some(parse_positive(value, line, key)?) };
            }
            "step.theta" => step.theta = parse_f64(value, line, key)?,
            "step.cfl_safety" => step.cfl_safety = parse_f64(value, line, key)?,
            "step.max_dt" => step.max_dt = parse_positive(value, line, key)?,
            "step.positivity_floor" => {
                let v = parse_f64(value, line, key)?;
                if v < 0.0 {
                    return Err(HarnessError::Config { line, msg: "step.positivity_floor must be >= 0".to_string() });
                }
                step.positivity_floor = v;
            }

            "fit.window_lo" => fit.window_lo = parse_f64(value, line, key)?,
            "fit.window_hi" => fit.window_hi = parse_f64(value, line, key)?,

            _ => {
                return Err(HarnessError::Config { line, msg: format!("unknown key `{key}`") });
            }
        }
    }

    let mut missing = Vec::new();
    if scenario.is_none() {
        missing.push("scenario");
    }
    if dim.is_none() || cells_x.is_none() || length_x.is_none() {
        missing.push("grid (grid.dim, grid.cells, grid.length)");
    }
    if horizon.is_none() {
        missing.push("horizon");
    }
    if !missing.is_empty() {
        return Err(HarnessError::MissingKeys(missing));
    }

    let dim = dim.unwrap();
    if dim == 2 && (cells_y.is_none() || length_y.is_none()) {
        return Err(HarnessError::MissingKeys(vec!["grid.cells_y and grid.length_y for dim = 2"]));
    }

    if !(0.0..=1.0).contains(&fit.window_lo) || !(0.0..=1.0).contains(&fit.window_hi) || fit.window_lo >= fit.window_hi {
        return Err(HarnessError::MissingKeys(vec!["fit window fractions must satisfy 0 <= lo < hi <= 1"]));
    }

    Ok(Config {
        scenario: scenario.unwrap(),
        grid: GridSpec {
            dim,
            lengths: [length_x.unwrap(), length_y.unwrap_or(1.0)],
            cells: [cells_x.unwrap(), cells_y.unwrap_or(1)],
        },
        params,
        init,
        step,
        horizon: horizon.unwrap(),
        cadence,
        snapshots,
        output_dir,
        lr,
        fit,
    })
}
