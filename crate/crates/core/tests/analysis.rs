mod common;

use common::*;
use hs2::analysis::{
    estimate_blowup_time, predict, scenario_monitor, summarize_run, Classification, EstimateMethod, Justification,
    LyapunovMonitor, RuntimeClass,
};
use hs2::characteristics::{default_seeds, integrate_characteristic, DecoupledCharacteristic};
use hs2::eulerian::{Failure, SolverConfig, StepStatus};
use hs2::state::{FourierSeries, InitialData, Sign};
use proptest::prelude::*;

#[test]
fn slope_fit_on_fine_scenario_a() {
    let cfg = SolverConfig { sample_dt: 2e-3, ..until(2.0) };
    let res = simulate(&scenario_a(), 4096, &cfg, &mut []);
    let est = estimate_blowup_time(&res.records).unwrap();
    assert_eq!(est.method, EstimateMethod::SlopeFit);
    assert!((est.t_star - 1.7408).abs() <= 0.02, "{est:?}");
}

#[test]
fn scenario_e_matches_lagrangian_minimum() {
    let init = scenario_e();
    let a = init.a_exact();
    let oracle = (0..256)
        .filter_map(|j| {
            let mut ch = DecoupledCharacteristic::from_initial_data(&init, a, j as f64 / 256.0, 1e-10);
            ch.advance_to(10.0).ok()?;
            ch.blowup_time()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(oracle.is_finite());
    let res = simulate(&init, 256, &until(10.0), &mut []);
    let s = summarize_run(&res);
    assert_eq!(s.class, RuntimeClass::BlowUp);
    let t_star = s.t_star.unwrap().t_star;
    assert!((t_star / oracle - 1.0).abs() <= 0.05, "{t_star} vs {oracle}");
}

#[test]
fn monitor_initial_and_deep_states() {
    let zero = state(&InitialData::new(FourierSeries::default(), FourierSeries::default(), Sign::Plus), 64);
    let r = scenario_monitor(&zero);
    assert_eq!((r.min_ux, r.max_ux, r.sup_abs_rhox), (0.0, 0.0, 0.0));

    let r = scenario_monitor(&state(&scenario_a(), 256));
    assert!((r.min_ux + 1.0).abs() < 1e-12);
    assert!((r.argmin_ux - 0.5).abs() < 1e-6);
    assert_eq!(r.sup_abs_rhox, 0.0);

    let res = simulate(&scenario_a(), 4096, &until(1.5), &mut []);
    assert_eq!(res.status, StepStatus::Smooth);
    let r = scenario_monitor(&res.final_state);
    assert!(r.min_ux <= -3.0, "{}", r.min_ux);
}

#[test]
fn certificate_on_scenario_b_at_t5() {
    let init = scenario_b();
    let mut mon = LyapunovMonitor::new(&init, init.a_exact(), &default_seeds(&init, 64)).unwrap();
    let res = simulate(&init, 256, &until(5.0), &mut [&mut mon]);
    assert_eq!(res.status, StepStatus::Smooth);
    let last = mon.last().unwrap();
    assert!((last.t - 5.0).abs() < 1e-12);
    assert!(last.w_max <= 36.56);
    assert!((last.bound - 3.0 * 2.5f64.exp()).abs() < 1e-9);
    assert!((last.ux_lower_bound + 1.5 * 2.5f64.exp()).abs() < 1e-9);
    for r in &res.records {
        assert!(r.w_max.unwrap() <= r.w_bound.unwrap() * (1.0 + 1e-3));
        assert!(r.min_ux >= r.ux_lower_bound.unwrap());
    }
}

#[test]
fn certificate_degenerates_when_growth_rate_vanishes() {
    // rho0^2 = 7/8 and u0' = cos/2 give a = -1/2
    let init = InitialData::new(sine(0.5 / std::f64::consts::TAU), FourierSeries::constant(0.875f64.sqrt()), Sign::Plus);
    let a = init.a_exact();
    assert!((1.0 + 2.0 * a).abs() < 1e-14);
    for j in 0..16 {
        let x0 = j as f64 / 16.0;
        let (m0, g0) = (init.u0.derivative(x0, 1), init.rho0.eval(x0));
        let tr = integrate_characteristic(x0, (m0, g0), Sign::Plus, a, 3.0, 1e-11).unwrap();
        let w = |m: f64, g: f64| g * g0 + g0 / g * (1.0 + m * m);
        let w0 = w(m0, g0);
        for s in &tr.samples {
            assert!((w(s.m, s.gamma) - w0).abs() < 1e-8 * w0, "x0={x0} t={}", s.t);
        }
    }
}

#[test]
fn prediction_and_runtime_agree_on_canned_scenarios() {
    let canned = [scenario_a(), scenario_b(), scenario_c(), scenario_e(), scenario_r(), negative_energy(), steep_slope()];
    for init in canned {
        let v = predict(&init, init.a_exact()).unwrap();
        match v.classification {
            Classification::BlowUp => {
                let horizon = v.time_bound.map_or(10.0, |b| b * 1.02);
                let res = simulate(&init, 256, &until(horizon), &mut []);
                assert!(matches!(res.status, StepStatus::BlowUpSuspected(_)), "{v} {:?}", res.status);
                assert!(res.final_state.t <= horizon);
            }
            Classification::Global => {
                assert_eq!(v.justification, Justification::NonvanishingDensity);
                let mut mon = LyapunovMonitor::new(&init, init.a_exact(), &default_seeds(&init, 64)).unwrap();
                let res = simulate(&init, 256, &until(5.0), &mut [&mut mon]);
                assert_eq!(res.status, StepStatus::Smooth);
                assert!(res.records.iter().all(|r| r.min_ux >= r.ux_lower_bound.unwrap()));
            }
            other => panic!("unexpected {other}"),
        }
    }
}

#[test]
fn failure_is_never_blowup() {
    let cfg = SolverConfig { a_drift_tol: 1e-16, ..until(1.5) };
    let res = simulate(&scenario_a(), 64, &cfg, &mut []);
    assert_eq!(res.status, StepStatus::Failed(Failure::ADrift));
    assert_eq!(summarize_run(&res).class, RuntimeClass::Failed);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn fit_recovers_decoupled_riccati_blowup(m0 in -3.0f64..-0.2, c in 0.1f64..1.5) {
        let exact = riccati_blowup(m0, c);
        let a = -c * c / 2.0;
        let mut ch = DecoupledCharacteristic::new(0.5, m0, 0.0, Sign::Plus, a, 1e-11);
        let mut series = Vec::new();
        let mut t = 0.0;
        let dt = exact / 4000.0;
        let template = scenario_monitor(&state(&scenario_a(), 16));
        while t < exact {
            let s = match ch.advance_to(t) { Ok(s) => s, Err(_) => break };
            if ch.blowup_time().is_some() || s.m < -1e4 { break; }
            series.push(hs2::DiagnosticsRecord { t, min_ux: s.m, ..template });
            t += dt;
        }
        let est = estimate_blowup_time(&series).unwrap();
        prop_assert!((est.t_star / exact - 1.0).abs() <= 0.01, "{} vs {}", est.t_star, exact);
    }
}
