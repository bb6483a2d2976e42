#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use hs2::eulerian::{run, Monitor, RunResult, SolverConfig};
use hs2::grid::PeriodicGrid;
use hs2::state::{realize, FourierSeries, InitialData, Sign, SystemState};

pub fn sine(amp: f64) -> FourierSeries {
    FourierSeries::constant(0.0).with_mode(1, 0.0, amp)
}

pub fn cosine(amp: f64) -> FourierSeries {
    FourierSeries::constant(0.0).with_mode(1, amp, 0.0)
}

pub fn offset(c: f64, f: FourierSeries) -> FourierSeries {
    FourierSeries { constant: c, ..f }
}

/// `u0 = sin(2 pi x) / (2 pi)`, so `u0' = cos(2 pi x)`.
pub fn unit_slope_wave() -> FourierSeries {
    sine(1.0 / TAU)
}

/// k = 1, rho0 = 0: pure Riccati descent at x = 1/2.
pub fn scenario_a() -> InitialData {
    InitialData::new(unit_slope_wave(), FourierSeries::default(), Sign::Plus)
}

/// k = 1, rho0 = 1: global, certificate constants c1 = 3, beta = 1.
pub fn scenario_b() -> InitialData {
    InitialData::new(unit_slope_wave(), FourierSeries::constant(1.0), Sign::Plus)
}

/// k = 1, rho0 = sin, u0 = 0: density zero at x = 0.
pub fn scenario_c() -> InitialData {
    InitialData::new(FourierSeries::default(), sine(1.0), Sign::Plus)
}

/// k = -1, a = 0, rho0 = cos.
pub fn scenario_e() -> InitialData {
    InitialData::new(unit_slope_wave(), cosine(1.0), Sign::Minus)
}

/// k = -1, a = -1/4.
pub fn negative_energy() -> InitialData {
    InitialData::new(unit_slope_wave(), FourierSeries::default(), Sign::Minus)
}

/// k = -1, a = 1/4, min u0' = -1 < -sqrt(1/2).
pub fn steep_slope() -> InitialData {
    InitialData::new(unit_slope_wave(), FourierSeries::constant(1.0), Sign::Minus)
}

/// k = 1, u0 = 0, rho0 = 1 + sin/2: global.
pub fn scenario_r() -> InitialData {
    InitialData::new(FourierSeries::default(), offset(1.0, sine(0.5)), Sign::Plus)
}

pub fn state(init: &InitialData, n: usize) -> SystemState {
    realize(init, &PeriodicGrid::new(n).unwrap(), 0.0).unwrap()
}

pub fn simulate(init: &InitialData, n: usize, cfg: &SolverConfig, monitors: &mut [&mut dyn Monitor]) -> RunResult {
    run(state(init, n), cfg, monitors).unwrap()
}

pub fn until(t_end: f64) -> SolverConfig {
    SolverConfig { t_end, ..Default::default() }
}

/// Solution of `m' = -(m^2 + c^2)/2`: `m(t) = c tan(atan(m0/c) - c t/2)`.
pub fn riccati_closed_form(m0: f64, c: f64, t: f64) -> f64 {
    c * ((m0 / c).atan() - c * t / 2.0).tan()
}

/// Time at which that solution reaches `-inf`.
pub fn riccati_blowup(m0: f64, c: f64) -> f64 {
    2.0 * ((m0 / c).atan() + FRAC_PI_2) / c
}

/// `(2a)^{-1/2} ln((m0 - sqrt(2a)) / (m0 + sqrt(2a)))`.
pub fn steep_slope_bound(m0: f64, a: f64) -> f64 {
    let c = (2.0 * a).sqrt();
    ((m0 - c) / (m0 + c)).ln() / c
}

pub fn max_rel_drift(res: &RunResult) -> (f64, f64) {
    let r0 = &res.records[0];
    let a = res.records.iter().map(|r| r.a_drift.abs()).fold(0.0, f64::max);
    let rho = res
        .records
        .iter()
        .map(|r| if r0.int_abs_rho == 0.0 { r.int_abs_rho.abs() } else { ((r.int_abs_rho - r0.int_abs_rho) / r0.int_abs_rho).abs() })
        .fold(0.0, f64::max);
    (a, rho)
}
