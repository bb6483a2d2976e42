//! Run configuration in a flat `key = value` text format.
//!
//! ```text
//! # Scenario B
//! k = 1
//! t_end = 5
//! grid.n = 256
//! rho0.const = 1
//! u0.mode = 1, 0, 0.15915494309189535   # mode, cos amplitude, sin amplitude
//! monitors = conservation, slopes, curvature, lyapunov
//! ```
//!
//! Keys are unique except `u0.mode` and `rho0.mode`, which accumulate.

use std::path::PathBuf;

use crate::eulerian::SolverConfig;
use crate::grid::PeriodicGrid;
use crate::state::{FourierSeries, InitialData, Sign};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

/// Optional per-sample diagnostics groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonitorKind {
    /// `a` drift and `int |rho|`.
    Conservation,
    /// `min u_x`, `max u_x`, `sup |rho_x|`.
    Slopes,
    /// `sup (u_xx^2 + rho_x^2)`.
    Curvature,
    /// Global-existence certificate.
    Lyapunov,
}

impl MonitorKind {
    pub const ALL: [MonitorKind; 4] =
        [MonitorKind::Conservation, MonitorKind::Slopes, MonitorKind::Curvature, MonitorKind::Lyapunov];

    pub fn name(self) -> &'static str {
        match self {
            MonitorKind::Conservation => "conservation",
            MonitorKind::Slopes => "slopes",
            MonitorKind::Curvature => "curvature",
            MonitorKind::Lyapunov => "lyapunov",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: Sign,
    pub n: usize,
    pub h: f64,
    pub solver: SolverConfig,
    pub u0: FourierSeries,
    pub rho0: FourierSeries,
    pub monitors: Vec<MonitorKind>,
    pub seeds_count: usize,
    pub output_path: PathBuf,
}

impl RunConfig {
    pub fn initial_data(&self) -> InitialData {
        InitialData::new(self.u0.clone(), self.rho0.clone(), self.k)
    }

    pub fn grid(&self) -> PeriodicGrid {
        PeriodicGrid::new(self.n).expect("validated grid size")
    }

    pub fn has_monitor(&self, m: MonitorKind) -> bool {
        self.monitors.contains(&m)
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    value: String,
}

fn entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Parse { line, msg: format!("expected `key = value`, got `{content}`") })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Parse { line, msg: "empty key".into() });
        }
        out.push(Entry { line, key: key.to_string(), value: value.trim().to_string() });
    }
    Ok(out)
}

fn real(e: &Entry) -> Result<f64, ConfigError> {
    e.value
        .parse::<f64>()
        .map_err(|_| ConfigError::Parse { line: e.line, msg: format!("`{}` is not a number", e.value) })
}

fn integer(e: &Entry) -> Result<i64, ConfigError> {
    e.value
        .parse::<i64>()
        .map_err(|_| ConfigError::Parse { line: e.line, msg: format!("`{}` is not an integer", e.value) })
}

fn flag(e: &Entry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" | "on" | "1" => Ok(true),
        "false" | "off" | "0" => Ok(false),
        v => Err(ConfigError::Parse { line: e.line, msg: format!("`{v}` is not a flag") }),
    }
}

fn mode(e: &Entry) -> Result<(u32, f64, f64), ConfigError> {
    let bad = || ConfigError::Parse { line: e.line, msg: format!("expected `mode, a_cos, a_sin`, got `{}`", e.value) };
    let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let m: u32 = parts[0].parse().map_err(|_| bad())?;
    if m == 0 {
        return Err(ConfigError::Parse { line: e.line, msg: "mode index must be positive; use `.const`".into() });
    }
    let c: f64 = parts[1].parse().map_err(|_| bad())?;
    let s: f64 = parts[2].parse().map_err(|_| bad())?;
    Ok((m, c, s))
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Parses `text` with some scalar keys replaced, as done for sweeps.
pub fn parse_config_with(text: &str, overrides: &[(&str, f64)]) -> Result<RunConfig, ConfigError> {
    let mut list = entries(text)?;
    for &(key, value) in overrides {
        if key.ends_with(".mode") {
            return Err(ConfigError::Validation(format!("`{key}` cannot be swept")));
        }
        list.retain(|e| e.key != key);
        list.push(Entry { line: 0, key: key.to_string(), value: format!("{value:?}") });
    }

    let mut seen = std::collections::HashSet::new();
    let mut k = None;
    let mut t_end = None;
    let mut n = 256usize;
    let mut h = 0.0;
    let mut solver = SolverConfig::default();
    let mut u0 = FourierSeries::default();
    let mut rho0 = FourierSeries::default();
    let mut monitors = MonitorKind::ALL.to_vec();
    let mut seeds_count = 64usize;
    let mut output_path = PathBuf::from("diagnostics.csv");

    for e in &list {
        if !e.key.ends_with(".mode") && !seen.insert(e.key.clone()) {
            return Err(ConfigError::Parse { line: e.line, msg: format!("duplicate key `{}`", e.key) });
        }
        match e.key.as_str() {
            "k" => {
                let v = real(e)?;
                k = Some(match v {
                    v if v == 1.0 => Sign::Plus,
                    v if v == -1.0 => Sign::Minus,
                    _ => return Err(ConfigError::Validation(format!("k must be 1 or -1, got {}", e.value))),
                });
            }
            "t_end" | "solver.t_end" => t_end = Some(real(e)?),
            "sample_dt" | "solver.sample_dt" => solver.sample_dt = real(e)?,
            "h" => h = real(e)?,
            "grid.n" => {
                let v = integer(e)?;
                n = usize::try_from(v).map_err(|_| ConfigError::Validation(format!("grid.n must be positive, got {v}")))?;
            }
            "seeds.count" => {
                let v = integer(e)?;
                seeds_count =
                    usize::try_from(v).map_err(|_| ConfigError::Validation(format!("seeds.count must be positive, got {v}")))?;
            }
            "output.path" => output_path = PathBuf::from(&e.value),
            "monitors" => {
                monitors = Vec::new();
                for name in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let m = MonitorKind::from_name(name)
                        .ok_or_else(|| ConfigError::Validation(format!("unknown monitor `{name}`")))?;
                    if !monitors.contains(&m) {
                        monitors.push(m);
                    }
                }
            }
            "u0.const" => u0.constant = real(e)?,
            "rho0.const" => rho0.constant = real(e)?,
            "u0.mode" => {
                let (m, c, s) = mode(e)?;
                u0 = u0.with_mode(m, c, s);
            }
            "rho0.mode" => {
                let (m, c, s) = mode(e)?;
                rho0 = rho0.with_mode(m, c, s);
            }
            "solver.cfl" => solver.cfl = real(e)?,
            "solver.dt_init" => solver.dt_init = real(e)?,
            "solver.dt_min" => solver.dt_min = real(e)?,
            "solver.dealias" => solver.dealias = flag(e)?,
            "solver.a_drift_tol" => solver.a_drift_tol = real(e)?,
            "solver.blowup_slope_threshold" => solver.blowup_slope_threshold = real(e)?,
            "solver.tail_energy_frac" => solver.tail_energy_frac = real(e)?,
            "solver.mean_tol" => solver.mean_tol = real(e)?,
            other => return Err(ConfigError::Parse { line: e.line, msg: format!("unknown key `{other}`") }),
        }
    }

    let k = k.ok_or_else(|| ConfigError::Validation("missing required key `k`".into()))?;
    solver.t_end = t_end.ok_or_else(|| ConfigError::Validation("missing required key `t_end`".into()))?;
    if n < 16 || n % 2 != 0 {
        return Err(ConfigError::Validation(format!("grid.n must be even and at least 16, got {n}")));
    }
    if !(solver.sample_dt > 0.0) {
        return Err(ConfigError::Validation("sample_dt must be positive".into()));
    }
    if seeds_count == 0 {
        return Err(ConfigError::Validation("seeds.count must be positive".into()));
    }
    if !h.is_finite() || !u0.constant.is_finite() || !rho0.constant.is_finite() {
        return Err(ConfigError::Validation("h and constants must be finite".into()));
    }
    solver.validate().map_err(|e| ConfigError::Validation(e.to_string()))?;
    let init = InitialData::new(u0.clone(), rho0.clone(), k);
    let grid = PeriodicGrid::new(n).map_err(|e| ConfigError::Validation(e.to_string()))?;
    init.validate_for(&grid).map_err(|e| ConfigError::Validation(e.to_string()))?;

    Ok(RunConfig { k, n, h, solver, u0, rho0, monitors, seeds_count, output_path })
}
