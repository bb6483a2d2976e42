use rustfft::num_complex::Complex64;

use crate::eulerian::{tail_fraction, BlowUpSignal, SolverConfig};
use crate::grid::{PeriodicGrid, SpectralInterpolant};
use crate::search::{golden_section_min, periodic_zeros_sampled, ZeroSearch};
use crate::state::{a_of, Sign, SystemState};

/// One diagnostics sample of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// Step that produced this state; zero for the initial record.
    pub dt: f64,
    /// `(a_now - a) / max(1, |a|)`.
    pub a_drift: f64,
    pub int_abs_rho: f64,
    pub min_ux: f64,
    pub argmin_ux: f64,
    pub rho_at_argmin: f64,
    pub max_ux: f64,
    pub sup_abs_rhox: f64,
    /// `sup (u_xx^2 + rho_x^2)`, recorded for `k = 1`.
    pub m_sup: Option<f64>,
    /// Where that supremum is attained.
    pub xi: f64,
    pub ux_at_xi: f64,
    pub tail_fraction: f64,
    pub w_max: Option<f64>,
    pub w_bound: Option<f64>,
    pub ux_lower_bound: Option<f64>,
    pub signal: Option<BlowUpSignal>,
}

impl DiagnosticsRecord {
    fn non_finite(t: f64) -> Self {
        let nan = f64::NAN;
        Self {
            t,
            dt: 0.0,
            a_drift: nan,
            int_abs_rho: nan,
            min_ux: nan,
            argmin_ux: nan,
            rho_at_argmin: nan,
            max_ux: nan,
            sup_abs_rhox: nan,
            m_sup: None,
            xi: nan,
            ux_at_xi: nan,
            tail_fraction: nan,
            w_max: None,
            w_bound: None,
            ux_lower_bound: None,
            signal: None,
        }
    }
}

/// Extremum of an interpolant near the best node, refined by golden section.
fn refine<F: Fn(f64) -> f64>(f: F, values: &[f64], h: f64) -> (f64, f64) {
    let (j, best) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (j, &v)| if v < acc.1 { (j, v) } else { acc });
    let x0 = j as f64 * h;
    let (x, v) = golden_section_min(&f, x0 - h, x0 + h, 1e-13);
    if v < best {
        (x.rem_euclid(1.0), v)
    } else {
        (x0, best)
    }
}

/// `int |rho|` computed exactly on the trigonometric interpolant: the
/// circle is split at the zeros of `rho` and each piece integrated through
/// the spectral antiderivative.
pub fn abs_integral(grid: &PeriodicGrid, rho: &[f64]) -> f64 {
    if rho.iter().all(|&r| r == 0.0) {
        return 0.0;
    }
    let n = grid.n();
    let spec = grid.forward(rho);
    let mean = spec[0].re / n as f64;
    let interp = SpectralInterpolant::from_spectrum(grid, &spec);
    let mut anti: Vec<Complex64> = spec;
    for (idx, c) in anti.iter_mut().enumerate() {
        if idx == 0 || idx == n / 2 {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c /= Complex64::new(0.0, std::f64::consts::TAU * grid.wavenumber(idx) as f64);
        }
    }
    let anti = SpectralInterpolant::from_spectrum(grid, &anti);
    let integral = |a: f64, b: f64| mean * (b - a) + anti.eval(b) - anti.eval(a);

    let opts = ZeroSearch { samples: n, root_tol: 1e-14, zero_tol: 0.0 };
    let zeros = periodic_zeros_sampled(|x| interp.eval(x), rho, opts);
    if zeros.is_empty() {
        return mean.abs();
    }
    let mut total = 0.0;
    for (i, &z) in zeros.iter().enumerate() {
        let next = if i + 1 < zeros.len() { zeros[i + 1] } else { zeros[0] + 1.0 };
        total += integral(z, next).abs();
    }
    total
}

/// Snapshot diagnostics with the default thresholds.
pub fn scenario_monitor(state: &SystemState) -> DiagnosticsRecord {
    scenario_monitor_with(state, &SolverConfig::default())
}

/// Snapshot diagnostics; `signal` names the first threshold of `cfg` that
/// the state trips.
pub fn scenario_monitor_with(state: &SystemState, cfg: &SolverConfig) -> DiagnosticsRecord {
    if !state.is_finite() {
        return DiagnosticsRecord::non_finite(state.t);
    }
    let grid = state.grid();
    let h = grid.spacing();
    let u = grid.interpolant(state.u.values());
    let rho = grid.interpolant(state.rho.values());
    let ux = grid.derivative(state.u.values());
    let uxx = grid.derivative_n(state.u.values(), 2);
    let rhox = grid.derivative(state.rho.values());

    let (argmin_ux, min_ux) = refine(|x| u.eval_derivative(x, 1), &ux, h);
    let neg: Vec<f64> = ux.iter().map(|v| -v).collect();
    let (_, neg_max) = refine(|x| -u.eval_derivative(x, 1), &neg, h);
    let neg_abs_rhox: Vec<f64> = rhox.iter().map(|v| -v.abs()).collect();
    let (_, neg_sup_rhox) = refine(|x| -rho.eval_derivative(x, 1).abs(), &neg_abs_rhox, h);

    let curvature = |x: f64| {
        let (a, b) = (u.eval_derivative(x, 2), rho.eval_derivative(x, 1));
        a * a + b * b
    };
    let neg_p: Vec<f64> = uxx.iter().zip(&rhox).map(|(a, b)| -(a * a + b * b)).collect();
    let (xi, neg_m) = refine(|x| -curvature(x), &neg_p, h);

    let a_now = a_of(grid, state.u.values(), state.rho.values(), state.k);
    let tail = tail_fraction(state, cfg);
    let sup_abs_rhox = -neg_sup_rhox;

    let signal = if min_ux < cfg.blowup_slope_threshold {
        Some(BlowUpSignal::SlopeThreshold)
    } else if state.k == Sign::Minus && sup_abs_rhox > 10.0 * cfg.blowup_slope_threshold.abs() {
        Some(BlowUpSignal::DensityGradient)
    } else if tail > cfg.tail_energy_frac {
        Some(BlowUpSignal::SpectralTail)
    } else {
        None
    };

    DiagnosticsRecord {
        t: state.t,
        dt: 0.0,
        a_drift: (a_now - state.a) / state.a.abs().max(1.0),
        int_abs_rho: abs_integral(grid, state.rho.values()),
        min_ux,
        argmin_ux,
        rho_at_argmin: rho.eval(argmin_ux),
        max_ux: -neg_max,
        sup_abs_rhox,
        m_sup: (state.k == Sign::Plus).then_some(-neg_m),
        xi,
        ux_at_xi: u.eval_derivative(xi, 1),
        tail_fraction: tail,
        w_max: None,
        w_bound: None,
        ux_lower_bound: None,
        signal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{realize, FourierSeries, InitialData};
    use std::f64::consts::TAU;

    fn state(u0: FourierSeries, rho0: FourierSeries, k: Sign) -> SystemState {
        realize(&InitialData::new(u0, rho0, k), &PeriodicGrid::new(64).unwrap(), 0.0).unwrap()
    }

    #[test]
    fn zero_state_extrema_vanish() {
        let r = scenario_monitor(&state(FourierSeries::default(), FourierSeries::default(), Sign::Plus));
        assert_eq!((r.min_ux, r.max_ux, r.sup_abs_rhox, r.int_abs_rho), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(r.m_sup, Some(0.0));
        assert_eq!(r.tail_fraction, 0.0);
        assert!(r.signal.is_none());
    }

    #[test]
    fn sine_velocity_snapshot() {
        let u0 = FourierSeries::constant(0.0).with_mode(1, 0.0, 1.0 / TAU);
        let r = scenario_monitor(&state(u0, FourierSeries::default(), Sign::Plus));
        assert!((r.min_ux + 1.0).abs() < 1e-14);
        assert!((r.argmin_ux - 0.5).abs() < 1e-6);
        assert!((r.max_ux - 1.0).abs() < 1e-14);
        assert_eq!(r.sup_abs_rhox, 0.0);
        // u_xx = -2 pi sin: sup of its square is 4 pi^2
        assert!((r.m_sup.unwrap() - TAU * TAU).abs() < 1e-10);
        assert!(r.ux_at_xi.abs() < 1e-6);
    }

    #[test]
    fn abs_integral_matches_closed_forms() {
        let grid = PeriodicGrid::new(64).unwrap();
        // int |sin| = 2/pi regardless of where the grid sits
        let shifted = grid.sample(|x| (TAU * (x - 0.0123)).sin());
        assert!((abs_integral(&grid, &shifted) - 2.0 / std::f64::consts::PI).abs() < 1e-13);
        // 0.5 + sin: zeros at 7/12 and 11/12
        let f = grid.sample(|x| 0.5 + (TAU * x).sin());
        let neg = 0.5 / 3.0 - 2.0 * (TAU * 11.0 / 12.0).cos() / TAU;
        let want = 0.5 - 2.0 * neg;
        assert!((abs_integral(&grid, &f) - want).abs() < 1e-12, "{} {want}", abs_integral(&grid, &f));
        let c = grid.sample(|_| -2.0);
        assert_eq!(abs_integral(&grid, &c), 2.0);
    }

    #[test]
    fn density_flag_only_for_negative_k() {
        let rho0 = FourierSeries::constant(0.0).with_mode(1, 0.0, 100.0);
        let r = scenario_monitor(&state(FourierSeries::default(), rho0.clone(), Sign::Minus));
        assert_eq!(r.signal, Some(BlowUpSignal::DensityGradient));
        assert!(r.m_sup.is_none());
        let r = scenario_monitor(&state(FourierSeries::default(), rho0, Sign::Plus));
        assert_eq!(r.signal, None);
    }
}
