//! Runs the rho0 = 0 wave into its gradient catastrophe and compares the
//! detected slope and blow-up time with the closed-form Riccati solution.

use std::f64::consts::{FRAC_PI_2, TAU};

use hs2::analysis::summarize_run;
use hs2::{realize, run, FourierSeries, InitialData, PeriodicGrid, Sign, SolverConfig};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1024);
    let init = InitialData::new(FourierSeries::constant(0.0).with_mode(1, 0.0, 1.0 / TAU), FourierSeries::default(), Sign::Plus);
    let grid = PeriodicGrid::new(n).expect("even n >= 16");
    let state = realize(&init, &grid, 0.0).unwrap();
    let cfg = SolverConfig { t_end: 2.0, sample_dt: 0.05, ..Default::default() };
    let res = run(state, &cfg, &mut []).unwrap();

    // m' = -(m^2 + c^2)/2 along x0 = 1/2 with c^2 = -2a = 1/2
    let c = (-2.0 * init.a_exact()).sqrt();
    let exact = |t: f64| c * ((-1.0 / c).atan() - c * t / 2.0).tan();
    println!("{:>6} {:>12} {:>12} {:>10}", "t", "min u_x", "closed form", "rel err");
    for r in res.records.iter().step_by(4) {
        let m = exact(r.t);
        println!("{:>6.2} {:>12.6} {:>12.6} {:>10.2e}", r.t, r.min_ux, m, ((r.min_ux - m) / m).abs());
    }
    let s = summarize_run(&res);
    println!("n={n} stopped at t={:.4} with {}", s.stopped_at, res.status);
    if let Some(e) = s.t_star {
        let t_exact = 2.0 * ((-1.0 / c).atan() + FRAC_PI_2) / c;
        println!("T* = {:.5} +/- {:.1e} ({:?}), closed form {t_exact:.5}", e.t_star, e.ci, e.method);
    }
}
