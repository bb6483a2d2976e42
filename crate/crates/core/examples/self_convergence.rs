//! Temporal order of the fixed-step scheme, measured by halving dt.

use std::f64::consts::TAU;

use hs2::{realize, run, FourierSeries, InitialData, PeriodicGrid, Sign, SolverConfig, SystemState};

fn solve(init: &InitialData, dt: f64) -> SystemState {
    let state = realize(init, &PeriodicGrid::new(256).unwrap(), 0.0).unwrap();
    let cfg = SolverConfig { t_end: 1.0, cfl: 1.0, dt_init: dt, sample_dt: 0.25, ..Default::default() };
    run(state, &cfg, &mut []).unwrap().final_state
}

fn sup(a: &SystemState, b: &SystemState) -> f64 {
    let du = a.u.values().iter().zip(b.u.values()).map(|(x, y)| (x - y).abs());
    let dr = a.rho.values().iter().zip(b.rho.values()).map(|(x, y)| (x - y).abs());
    du.chain(dr).fold(0.0, f64::max)
}

fn main() {
    let init = InitialData::new(FourierSeries::constant(0.0).with_mode(1, 0.0, 1.0 / TAU), FourierSeries::default(), Sign::Plus);
    let dts = [0.02, 0.01, 0.005, 0.0025];
    let sols: Vec<SystemState> = dts.iter().map(|&dt| solve(&init, dt)).collect();
    let diffs: Vec<f64> = sols.windows(2).map(|w| sup(&w[0], &w[1])).collect();
    for (i, d) in diffs.iter().enumerate() {
        print!("dt={:<7} |u_dt - u_dt/2| = {d:.3e}", dts[i]);
        if i > 0 {
            print!("  order {:.3}", (diffs[i - 1] / d).log2());
        }
        println!();
    }
}
