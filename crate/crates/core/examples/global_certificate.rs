//! Nonvanishing density keeps the solution global; the Lyapunov weight and
//! the slope floor it implies are printed next to the computed values.

use std::f64::consts::TAU;

use hs2::analysis::LyapunovMonitor;
use hs2::characteristics::default_seeds;
use hs2::{realize, run, FourierSeries, InitialData, PeriodicGrid, Sign, SolverConfig};

fn main() {
    let init = InitialData::new(FourierSeries::constant(0.0).with_mode(1, 0.0, 1.0 / TAU), FourierSeries::constant(1.0), Sign::Plus);
    let state = realize(&init, &PeriodicGrid::new(256).unwrap(), 0.0).unwrap();
    let mut mon = LyapunovMonitor::new(&init, state.a, &default_seeds(&init, 64)).expect("rho0 never vanishes");
    let cfg = SolverConfig { t_end: 5.0, sample_dt: 0.5, ..Default::default() };
    let res = run(state, &cfg, &mut [&mut mon]).unwrap();

    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "t", "w_max", "bound", "min u_x", "floor");
    for r in &res.records {
        let (w, b, f) = (r.w_max.unwrap(), r.w_bound.unwrap(), r.ux_lower_bound.unwrap());
        println!("{:>5.1} {w:>10.4} {b:>10.4} {:>10.4} {f:>10.4}", r.t, r.min_ux);
    }
    let last = mon.last().unwrap();
    println!("status {}, beta={}, C1={}", res.status, last.beta, last.c1);
}
