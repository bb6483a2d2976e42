//! Tracers advected with the flow carry the density: rho(t, q) q_x = rho0(x0).

use std::f64::consts::TAU;

use hs2::characteristics::verify_transport_identity;
use hs2::{realize, run_with_tracers, FourierSeries, InitialData, PeriodicGrid, Sign, SolverConfig};

fn main() {
    let init = InitialData::new(FourierSeries::constant(0.0).with_mode(1, 0.0, 1.0 / TAU), FourierSeries::constant(1.0), Sign::Plus);
    let seeds: Vec<f64> = (0..64).map(|j| j as f64 / 64.0).collect();
    let rho0: Vec<f64> = seeds.iter().map(|&x| init.rho0.eval(x)).collect();
    let mut state = realize(&init, &PeriodicGrid::new(256).unwrap(), 0.0).unwrap();
    let mut tracers = hs2::characteristics::TracerSet::new(&seeds);
    for t_end in [1.0, 2.0, 3.0, 4.0, 5.0] {
        let cfg = SolverConfig { t_end, sample_dt: 0.5, ..Default::default() };
        let res = run_with_tracers(state.clone(), &tracers.q, &cfg, &mut []).unwrap();
        let mut next = res.tracers.unwrap();
        // restarts begin from the current positions; keep the accumulated stretch
        for (l, prev) in next.log_qx.iter_mut().zip(&tracers.log_qx) {
            *l += prev;
        }
        next.x0 = seeds.clone();
        let chars = next.coupled_states(&res.final_state, &rho0);
        let resid = verify_transport_identity(&res.final_state, &chars);
        let min_qx = chars.iter().map(|c| c.qx()).fold(f64::INFINITY, f64::min);
        println!("t={:.1}  residual {resid:.2e}  min q_x {min_qx:.4}  {}", res.final_state.t, res.status);
        if !res.status.is_smooth() {
            break;
        }
        state = res.final_state;
        tracers = next;
    }
}
