//! Time integration of the nonlocal evolution form
//!
//! ```text
//! u_t + u u_x = d_x^{-1}((k/2) rho^2 + (1/2) u_x^2 + a) + h
//! rho_t + (rho u)_x = 0
//! ```
//!
//! with classical RK4, a CFL-limited step and blow-up-aware termination.
//! Blow-up is detected, never resolved: once a detector trips the run stops
//! and later stages extrapolate.

use std::fmt;

use rustfft::num_complex::Complex64;

use crate::analysis::{scenario_monitor_with, DiagnosticsRecord};
use crate::characteristics::TracerSet;
use crate::grid::{GridError, GridField, PeriodicGrid, SpectralInterpolant, DEFAULT_MEAN_TOL};
use crate::state::{a_of, Sign, SystemState};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub cfl: f64,
    /// Initial and maximal step.
    pub dt_init: f64,
    pub dt_min: f64,
    pub t_end: f64,
    pub dealias: bool,
    /// Relative drift of `a` treated as a numerical failure.
    pub a_drift_tol: f64,
    /// `min u_x` below this is reported as suspected blow-up.
    pub blowup_slope_threshold: f64,
    /// Spectral tail fraction signalling lost resolution.
    pub tail_energy_frac: f64,
    /// Absolute tolerance on the mean of the nonlocal integrand at each accepted state.
    pub mean_tol: f64,
    /// Diagnostics cadence in [`run`].
    pub sample_dt: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.3,
            dt_init: 1e-2,
            dt_min: 1e-9,
            t_end: 1.0,
            dealias: true,
            a_drift_tol: 1e-7,
            blowup_slope_threshold: -50.0,
            tail_energy_frac: 1e-4,
            mean_tol: DEFAULT_MEAN_TOL,
            sample_dt: 1e-2,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |msg: &str| Err(SolverError::InvalidConfig(msg.to_string()));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl must lie in (0, 1]");
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt_init) {
            return bad("dt_min must be positive and below dt_init");
        }
        if !(self.t_end > 0.0) {
            return bad("t_end must be positive");
        }
        if !(self.sample_dt > 0.0) {
            return bad("sample_dt must be positive");
        }
        if !(self.tail_energy_frac > 0.0 && self.a_drift_tol > 0.0 && self.mean_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.blowup_slope_threshold < 0.0) {
            return bad("blowup_slope_threshold must be negative");
        }
        Ok(())
    }

    /// Band whose top third is watched for lost resolution.
    pub(crate) fn tail_cutoff(&self, grid: &PeriodicGrid) -> usize {
        if self.dealias {
            grid.dealias_cutoff()
        } else {
            grid.n() / 2
        }
    }
}

/// Which detector tripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlowUpSignal {
    SlopeThreshold,
    DensityGradient,
    StepTooSmall,
    SpectralTail,
}

impl BlowUpSignal {
    pub fn name(self) -> &'static str {
        match self {
            BlowUpSignal::SlopeThreshold => "SlopeThreshold",
            BlowUpSignal::DensityGradient => "DensityGradient",
            BlowUpSignal::StepTooSmall => "StepTooSmall",
            BlowUpSignal::SpectralTail => "SpectralTail",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Failure {
    NonFinite,
    MeanNotZero,
    ADrift,
}

impl Failure {
    pub fn name(self) -> &'static str {
        match self {
            Failure::NonFinite => "NonFinite",
            Failure::MeanNotZero => "MeanNotZero",
            Failure::ADrift => "ADrift",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepStatus {
    Smooth,
    BlowUpSuspected(BlowUpSignal),
    Failed(Failure),
}

impl StepStatus {
    pub fn is_smooth(self) -> bool {
        self == StepStatus::Smooth
    }
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepStatus::Smooth => f.write_str("Smooth"),
            StepStatus::BlowUpSuspected(_) => f.write_str("BlowUpSuspected"),
            StepStatus::Failed(_) => f.write_str("Failed"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: SystemState,
    pub dt_used: f64,
    pub status: StepStatus,
}

/// Stage tendencies plus the velocity interpolant for tracers.
struct Tendency {
    du: Vec<f64>,
    drho: Vec<f64>,
    u_interp: SpectralInterpolant,
}

fn tendency(grid: &PeriodicGrid, u: &[f64], rho: &[f64], k: Sign, a: f64, h: f64, dealias: bool) -> Tendency {
    let n = grid.n();
    let spec_u = grid.forward(u);
    let mut spec_ux = spec_u.clone();
    grid.differentiate_spectrum(&mut spec_ux, 1);
    let ux = grid.inverse(spec_ux);

    let kv = 0.5 * k.value();
    let adv: Vec<f64> = u.iter().zip(&ux).map(|(a, b)| a * b).collect();
    let src: Vec<f64> = rho.iter().zip(&ux).map(|(r, d)| kv * r * r + 0.5 * d * d + a).collect();
    let flux: Vec<f64> = rho.iter().zip(u).map(|(r, v)| r * v).collect();

    let mut spec_adv = grid.forward(&adv);
    let mut spec_src = grid.forward(&src);
    let mut spec_flux = grid.forward(&flux);
    if dealias {
        grid.filter_spectrum(&mut spec_adv);
        grid.filter_spectrum(&mut spec_src);
        grid.filter_spectrum(&mut spec_flux);
    }

    // d_x^{-1} of the mean-free part, pinned to zero at x = 0 by shifting the mean slot
    let mut anti = spec_src;
    let mut pin = Complex64::new(0.0, 0.0);
    for (idx, c) in anti.iter_mut().enumerate() {
        if idx == 0 || idx == n / 2 {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c /= Complex64::new(0.0, std::f64::consts::TAU * grid.wavenumber(idx) as f64);
            pin += *c;
        }
    }
    let mut spec_du: Vec<Complex64> = anti.iter().zip(&spec_adv).map(|(g, v)| g - v).collect();
    spec_du[0] = spec_du[0] - pin + Complex64::new(h * n as f64, 0.0);
    let du = grid.inverse(spec_du);

    grid.differentiate_spectrum(&mut spec_flux, 1);
    let drho: Vec<f64> = grid.inverse(spec_flux).into_iter().map(|v| -v).collect();

    Tendency { du, drho, u_interp: SpectralInterpolant::from_spectrum(grid, &spec_u) }
}

/// Right-hand side of the evolution form with default options.
pub fn rhs(state: &SystemState) -> Result<(GridField, GridField), SolverError> {
    rhs_with(state, &SolverConfig::default())
}

/// Right-hand side; fails with `MeanNotZero` when the nonlocal integrand is
/// not mean-free, i.e. `state.a` disagrees with the fields.
pub fn rhs_with(state: &SystemState, cfg: &SolverConfig) -> Result<(GridField, GridField), SolverError> {
    let grid = state.grid();
    let mean = state.a - a_of(grid, state.u.values(), state.rho.values(), state.k);
    if mean.abs() > cfg.mean_tol || !mean.is_finite() {
        return Err(GridError::MeanNotZero { mean, tol: cfg.mean_tol }.into());
    }
    let t = tendency(grid, state.u.values(), state.rho.values(), state.k, state.a, state.h, cfg.dealias);
    Ok((GridField::new(grid.clone(), t.du)?, GridField::new(grid.clone(), t.drho)?))
}

fn axpy(base: &[f64], dt: f64, k: &[f64]) -> Vec<f64> {
    base.iter().zip(k).map(|(b, d)| b + dt * d).collect()
}

fn tracer_rates(t: &Tendency, q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    q.iter().map(|&x| (t.u_interp.eval(x), t.u_interp.eval_derivative(x, 1))).unzip()
}

/// One classical RK4 step of size `dt`, advancing tracers alongside.
fn rk4(state: &SystemState, tracers: Option<&TracerSet>, dt: f64, dealias: bool) -> (SystemState, Option<TracerSet>) {
    let grid = state.grid();
    let (k, a, h) = (state.k, state.a, state.h);
    let u0 = state.u.values();
    let r0 = state.rho.values();
    let f = |u: &[f64], r: &[f64]| tendency(grid, u, r, k, a, h, dealias);

    let empty = TracerSet::new(&[]);
    let tr = tracers.unwrap_or(&empty);

    let s1 = f(u0, r0);
    let (q1, l1) = tracer_rates(&s1, &tr.q);
    let s2 = f(&axpy(u0, 0.5 * dt, &s1.du), &axpy(r0, 0.5 * dt, &s1.drho));
    let (q2, l2) = tracer_rates(&s2, &axpy(&tr.q, 0.5 * dt, &q1));
    let s3 = f(&axpy(u0, 0.5 * dt, &s2.du), &axpy(r0, 0.5 * dt, &s2.drho));
    let (q3, l3) = tracer_rates(&s3, &axpy(&tr.q, 0.5 * dt, &q2));
    let s4 = f(&axpy(u0, dt, &s3.du), &axpy(r0, dt, &s3.drho));
    let (q4, l4) = tracer_rates(&s4, &axpy(&tr.q, dt, &q3));

    let combine = |base: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..base.len()).map(|i| base[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i])).collect()
    };
    let u = combine(u0, &s1.du, &s2.du, &s3.du, &s4.du);
    let rho = combine(r0, &s1.drho, &s2.drho, &s3.drho, &s4.drho);
    let next = SystemState {
        t: state.t + dt,
        u: GridField::new(grid.clone(), u).expect("length preserved"),
        rho: GridField::new(grid.clone(), rho).expect("length preserved"),
        k,
        a,
        h,
    };
    let tracers = tracers.map(|tr| TracerSet {
        x0: tr.x0.clone(),
        q: combine(&tr.q, &q1, &q2, &q3, &q4),
        log_qx: combine(&tr.log_qx, &l1, &l2, &l3, &l4),
    });
    (next, tracers)
}

/// Largest step allowed by the CFL condition and `dt_init`.
pub fn natural_dt(state: &SystemState, cfg: &SolverConfig) -> f64 {
    let umax = state.u.sup_norm();
    let cfl_dt = if umax > 0.0 { cfg.cfl / (state.grid().n() as f64 * umax) } else { f64::INFINITY };
    cfl_dt.min(cfg.dt_init)
}

/// Fraction of the combined `u_x` and `rho_x` spectral energy sitting in the
/// top third of the resolved band. Slopes rather than values, so a constant
/// density offset cannot hide an unresolved front.
pub fn tail_fraction(state: &SystemState, cfg: &SolverConfig) -> f64 {
    let grid = state.grid();
    let cutoff = cfg.tail_cutoff(grid);
    let slope_tail = |f: &[f64]| {
        let mut spec = grid.forward(f);
        grid.differentiate_spectrum(&mut spec, 1);
        grid.tail_energy(&spec, cutoff)
    };
    let (t1, e1) = slope_tail(state.u.values());
    let (t2, e2) = slope_tail(state.rho.values());
    let total = e1 + e2;
    if total <= 1e-24 * grid.n() as f64 {
        0.0
    } else {
        (t1 + t2) / total
    }
}

/// Detector verdict for a freshly computed state.
fn classify(state: &SystemState, natural: f64, cfg: &SolverConfig) -> StepStatus {
    if !state.is_finite() {
        return StepStatus::Failed(Failure::NonFinite);
    }
    let grid = state.grid();
    let ux = grid.derivative(state.u.values());
    let min_ux = ux.iter().copied().fold(f64::INFINITY, f64::min);
    if min_ux < cfg.blowup_slope_threshold {
        return StepStatus::BlowUpSuspected(BlowUpSignal::SlopeThreshold);
    }
    if state.k == Sign::Minus {
        let rhox = grid.derivative(state.rho.values());
        let sup = rhox.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if sup > 10.0 * cfg.blowup_slope_threshold.abs() {
            return StepStatus::BlowUpSuspected(BlowUpSignal::DensityGradient);
        }
    }
    if tail_fraction(state, cfg) > cfg.tail_energy_frac {
        return StepStatus::BlowUpSuspected(BlowUpSignal::SpectralTail);
    }
    if natural < cfg.dt_min {
        return StepStatus::BlowUpSuspected(BlowUpSignal::StepTooSmall);
    }
    let a_now = a_of(grid, state.u.values(), state.rho.values(), state.k);
    if (state.a - a_now).abs() > cfg.mean_tol {
        return StepStatus::Failed(Failure::MeanNotZero);
    }
    if (a_now - state.a).abs() / state.a.abs().max(1.0) > cfg.a_drift_tol {
        return StepStatus::Failed(Failure::ADrift);
    }
    StepStatus::Smooth
}

fn pre_step_check(state: &SystemState, cfg: &SolverConfig) -> Option<StepStatus> {
    if !state.is_finite() {
        return Some(StepStatus::Failed(Failure::NonFinite));
    }
    let mean = state.a - a_of(state.grid(), state.u.values(), state.rho.values(), state.k);
    if mean.abs() > cfg.mean_tol || !mean.is_finite() {
        return Some(StepStatus::Failed(Failure::MeanNotZero));
    }
    None
}

/// Advances by `min(cfl / (n max|u|), dt_init)`, clipped to `t_end`.
pub fn step(state: &SystemState, cfg: &SolverConfig) -> StepOutcome {
    let natural = natural_dt(state, cfg);
    let dt = natural.min(cfg.t_end - state.t).max(0.0);
    step_by(state, None, dt, natural, cfg).0
}

fn step_by(
    state: &SystemState,
    tracers: Option<&TracerSet>,
    dt: f64,
    natural: f64,
    cfg: &SolverConfig,
) -> (StepOutcome, Option<TracerSet>) {
    if let Some(status) = pre_step_check(state, cfg) {
        return (StepOutcome { state: state.clone(), dt_used: 0.0, status }, tracers.cloned());
    }
    if natural < cfg.dt_min {
        let status = StepStatus::BlowUpSuspected(BlowUpSignal::StepTooSmall);
        return (StepOutcome { state: state.clone(), dt_used: 0.0, status }, tracers.cloned());
    }
    let (next, tracers) = rk4(state, tracers, dt, cfg.dealias);
    let status = classify(&next, natural_dt(&next, cfg), cfg);
    (StepOutcome { state: next, dt_used: dt, status }, tracers)
}

/// Context handed to monitors at each diagnostics sample.
pub struct Sample<'a> {
    pub state: &'a SystemState,
    pub tracers: Option<&'a TracerSet>,
}

/// Hook invoked synchronously at every diagnostics sample.
pub trait Monitor {
    fn observe(&mut self, sample: &Sample<'_>, record: &mut DiagnosticsRecord);
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_state: SystemState,
    pub status: StepStatus,
    pub records: Vec<DiagnosticsRecord>,
    pub steps: usize,
    pub tracers: Option<TracerSet>,
}

impl RunResult {
    /// Diagnostics records taken before any detector tripped.
    pub fn smooth_records(&self) -> impl Iterator<Item = &DiagnosticsRecord> {
        self.records.iter().filter(|r| r.signal.is_none())
    }
}

/// Iterates [`step`] until `cfg.t_end` or a non-smooth status, sampling
/// diagnostics every `cfg.sample_dt`.
pub fn run(state: SystemState, cfg: &SolverConfig, monitors: &mut [&mut dyn Monitor]) -> Result<RunResult, SolverError> {
    drive(state, None, cfg, monitors)
}

/// [`run`] with tracers seeded at `seeds` and advanced by the same RK4 stages.
pub fn run_with_tracers(
    state: SystemState,
    seeds: &[f64],
    cfg: &SolverConfig,
    monitors: &mut [&mut dyn Monitor],
) -> Result<RunResult, SolverError> {
    drive(state, Some(TracerSet::new(seeds)), cfg, monitors)
}

fn record(
    state: &SystemState,
    tracers: Option<&TracerSet>,
    dt: f64,
    signal: Option<BlowUpSignal>,
    cfg: &SolverConfig,
    monitors: &mut [&mut dyn Monitor],
) -> DiagnosticsRecord {
    let mut rec = scenario_monitor_with(state, cfg);
    rec.dt = dt;
    if signal.is_some() {
        rec.signal = signal;
    }
    let sample = Sample { state, tracers };
    for m in monitors.iter_mut() {
        m.observe(&sample, &mut rec);
    }
    rec
}

fn drive(
    mut state: SystemState,
    mut tracers: Option<TracerSet>,
    cfg: &SolverConfig,
    monitors: &mut [&mut dyn Monitor],
) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    if !(cfg.t_end > state.t) {
        return Err(SolverError::InvalidConfig("t_end must exceed the initial time".into()));
    }
    let mut records = vec![record(&state, tracers.as_ref(), 0.0, None, cfg, monitors)];
    let t0 = state.t;
    let mut next_sample: u64 = 1;
    let mut steps = 0;
    let eps = 1e-12 * cfg.t_end.max(1.0);
    let status = loop {
        if state.t >= cfg.t_end - eps {
            break StepStatus::Smooth;
        }
        let mut target = (t0 + next_sample as f64 * cfg.sample_dt).min(cfg.t_end);
        if cfg.t_end - target < eps {
            target = cfg.t_end;
        }
        let natural = natural_dt(&state, cfg);
        let remaining = target - state.t;
        // a step ending within rounding of the target snaps onto it
        let hits = natural >= remaining - eps;
        let dt = if hits { remaining } else { natural };
        let (mut outcome, next_tracers) = step_by(&state, tracers.as_ref(), dt, natural, cfg);
        if outcome.dt_used > 0.0 {
            steps += 1;
        }
        if hits && outcome.dt_used > 0.0 {
            outcome.state.t = target;
        }
        state = outcome.state;
        tracers = next_tracers;
        match outcome.status {
            StepStatus::Smooth => {
                if hits {
                    records.push(record(&state, tracers.as_ref(), outcome.dt_used, None, cfg, monitors));
                    next_sample += 1;
                }
            }
            StepStatus::BlowUpSuspected(signal) => {
                records.push(record(&state, tracers.as_ref(), outcome.dt_used, Some(signal), cfg, monitors));
                break outcome.status;
            }
            StepStatus::Failed(_) => {
                records.push(record(&state, tracers.as_ref(), outcome.dt_used, None, cfg, monitors));
                break outcome.status;
            }
        }
    };
    Ok(RunResult { final_state: state, status, records, steps, tracers })
}
