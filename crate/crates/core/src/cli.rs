//! `hs2 predict | run | sweep`.
//!
//! Exit codes: 0 success, 2 blow-up suspected, 3 configuration error,
//! 4 numerical failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{predict, summarize_run, LyapunovMonitor, RunSummary, RuntimeClass, Verdict};
use crate::characteristics::default_seeds;
use crate::config::{parse_config, parse_config_with, ConfigError, MonitorKind, RunConfig};
use crate::eulerian::{run, Monitor, RunResult, StepStatus};
use crate::state::realize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BLOWUP: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

pub const CSV_HEADER: [&str; 11] =
    ["t", "dt", "a_drift", "int_abs_rho", "min_ux", "max_ux", "sup_abs_rhox", "M_sup", "w_max", "w_bound", "ux_lower_bound"];

#[derive(Parser, Debug)]
#[command(name = "hs2", about = "Two-component Hunter-Saxton blow-up explorer")]
struct Args {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify initial data without running the solver.
    Predict { config: PathBuf },
    /// Run the solver and write per-sample diagnostics as CSV.
    Run {
        config: PathBuf,
        /// Overrides `output.path`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Predict and run over a one-parameter family.
    Sweep {
        config: PathBuf,
        /// `knob=start:stop:count`, e.g. `rho0.const=0.5:1.5:3`.
        #[arg(long)]
        axis: String,
        /// Write the table here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Shortest round-trip rendering.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn cell(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Scalar knob swept over `count` evenly spaced values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub knob: String,
    pub values: Vec<f64>,
}

pub fn parse_axis(text: &str) -> Result<Axis, ConfigError> {
    let bad = || ConfigError::Validation(format!("malformed axis `{text}`, expected knob=start:stop:count"));
    let (knob, range) = text.split_once('=').ok_or_else(bad)?;
    let knob = knob.trim();
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    if knob.is_empty() || parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(ConfigError::Validation(format!("axis `{text}` is empty")));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let values = if count == 1 {
        vec![start]
    } else {
        (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect()
    };
    Ok(Axis { knob: knob.to_string(), values })
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    parse_config(&read(path)?)
}

pub fn cmd_predict(cfg: &RunConfig) -> Verdict {
    let init = cfg.initial_data();
    predict(&init, init.a_exact()).expect("a recomputed from the same data")
}

/// Runs the configured scenario with every enabled monitor.
pub fn execute(cfg: &RunConfig) -> Result<RunResult, ConfigError> {
    let init = cfg.initial_data();
    let state = realize(&init, &cfg.grid(), cfg.h).map_err(|e| ConfigError::Validation(e.to_string()))?;
    let mut lyapunov = if cfg.has_monitor(MonitorKind::Lyapunov) {
        LyapunovMonitor::new(&init, state.a, &default_seeds(&init, cfg.seeds_count)).ok()
    } else {
        None
    };
    let mut monitors: Vec<&mut dyn Monitor> = Vec::new();
    if let Some(m) = lyapunov.as_mut() {
        monitors.push(m);
    }
    run(state, &cfg.solver, &mut monitors).map_err(|e| ConfigError::Validation(e.to_string()))
}

/// Diagnostics table with the columns of disabled or inapplicable monitors left empty.
pub fn write_csv<W: Write>(out: W, cfg: &RunConfig, result: &RunResult) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let on = |m| cfg.has_monitor(m);
    for r in &result.records {
        let cons = |v: f64| if on(MonitorKind::Conservation) { fmt_f64(v) } else { String::new() };
        let slope = |v: f64| if on(MonitorKind::Slopes) { fmt_f64(v) } else { String::new() };
        let lyap = |v: Option<f64>| if on(MonitorKind::Lyapunov) { cell(v) } else { String::new() };
        w.write_record([
            fmt_f64(r.t),
            fmt_f64(r.dt),
            cons(r.a_drift),
            cons(r.int_abs_rho),
            slope(r.min_ux),
            slope(r.max_ux),
            slope(r.sup_abs_rhox),
            if on(MonitorKind::Curvature) { cell(r.m_sup) } else { String::new() },
            lyap(r.w_max),
            lyap(r.w_bound),
            lyap(r.ux_lower_bound),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn summary_line(result: &RunResult, summary: &RunSummary) -> String {
    let mut s = format!("status={} t_final={} steps={}", result.status, fmt_f64(summary.stopped_at), result.steps);
    match result.status {
        StepStatus::BlowUpSuspected(sig) => s += &format!(" signal={}", sig.name()),
        StepStatus::Failed(f) => s += &format!(" failure={}", f.name()),
        StepStatus::Smooth => {}
    }
    s += &format!(" runtime={}", summary.class);
    if summary.class == RuntimeClass::BlowUp {
        if let Some(e) = summary.t_star {
            s += &format!(" T_star={} ci={}", fmt_f64(e.t_star), fmt_f64(e.ci));
        }
    }
    s
}

pub fn exit_code(status: StepStatus) -> i32 {
    match status {
        StepStatus::Smooth => EXIT_OK,
        StepStatus::BlowUpSuspected(_) => EXIT_BLOWUP,
        StepStatus::Failed(_) => EXIT_FAILED,
    }
}

pub fn cmd_run(cfg: &RunConfig, output: &Path, stdout: &mut dyn Write) -> Result<i32, ConfigError> {
    let result = execute(cfg)?;
    let file = std::fs::File::create(output).map_err(|e| ConfigError::Io(format!("{}: {e}", output.display())))?;
    write_csv(std::io::BufWriter::new(file), cfg, &result).map_err(|e| ConfigError::Io(e.to_string()))?;
    let summary = summarize_run(&result);
    writeln!(stdout, "{}", summary_line(&result, &summary)).map_err(|e| ConfigError::Io(e.to_string()))?;
    Ok(exit_code(result.status))
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub a: f64,
    pub predicted: Verdict,
    pub runtime: RuntimeClass,
    pub t_star: Option<f64>,
}

fn thread_cap() -> Option<usize> {
    std::env::var("HS2_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Every config of the sweep is validated before any run starts.
pub fn cmd_sweep(template: &str, axis: &Axis) -> Result<Vec<SweepRow>, ConfigError> {
    let configs = axis
        .values
        .iter()
        .map(|&v| parse_config_with(template, &[(axis.knob.as_str(), v)]))
        .collect::<Result<Vec<_>, _>>()?;
    let job = |(cfg, &value): (&RunConfig, &f64)| -> Result<SweepRow, ConfigError> {
        let predicted = cmd_predict(cfg);
        let result = execute(cfg)?;
        let summary = summarize_run(&result);
        let t_star = (summary.class == RuntimeClass::BlowUp).then(|| summary.t_star.map(|e| e.t_star)).flatten();
        Ok(SweepRow { value, a: result.final_state.a, predicted, runtime: summary.class, t_star })
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| ConfigError::Io(e.to_string()))?;
    pool.install(|| configs.par_iter().zip(axis.values.par_iter()).map(job).collect())
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["value", "a", "predicted", "justification", "runtime", "T_star"])?;
    for r in rows {
        w.write_record([
            fmt_f64(r.value),
            fmt_f64(r.a),
            r.predicted.classification.to_string(),
            r.predicted.justification.tag().to_string(),
            r.runtime.to_string(),
            cell(r.t_star),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<i32, ConfigError> {
    let io = |e: std::io::Error| ConfigError::Io(e.to_string());
    match cmd {
        Command::Predict { config } => {
            let cfg = load_config(&config)?;
            writeln!(stdout, "{}", cmd_predict(&cfg)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Run { config, output } => {
            let cfg = load_config(&config)?;
            let path = output.unwrap_or_else(|| cfg.output_path.clone());
            cmd_run(&cfg, &path, stdout)
        }
        Command::Sweep { config, axis, output } => {
            let axis = parse_axis(&axis)?;
            let rows = cmd_sweep(&read(&config)?, &axis)?;
            match output {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(io)?;
                    write_sweep(file, &rows).map_err(|e| ConfigError::Io(e.to_string()))?;
                }
                None => write_sweep(&mut *stdout, &rows).map_err(|e| ConfigError::Io(e.to_string()))?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(args.cmd, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "hs2: {e}");
            EXIT_CONFIG
        }
    }
}
