//! Decoupled characteristic ODE: first integral and density-zero blow-up.

use hs2::characteristics::{integrate_characteristic, riccati_invariant};
use hs2::Sign;

fn main() {
    for &(m0, g0, k, a) in &[(0.5, 1.0, Sign::Plus, -0.5), (-0.3, 0.8, Sign::Minus, 0.2), (1.0, -0.5, Sign::Plus, 0.1)] {
        let tr = integrate_characteristic(0.0, (m0, g0), k, a, 3.0, 1e-10).unwrap();
        let i0 = riccati_invariant(m0, g0, k, a).unwrap();
        let drift = tr
            .samples
            .iter()
            .filter_map(|s| riccati_invariant(s.m, s.gamma, k, a))
            .map(|i| (i - i0).abs())
            .fold(0.0, f64::max);
        let end = tr.last();
        println!(
            "m0={m0:+} g0={g0:+} k={:+} a={a:+}: {} steps, end (m, gamma)=({:.5}, {:.5}), max |dI| {drift:.1e}, blow-up {:?}",
            k.value(),
            tr.samples.len(),
            end.m,
            end.gamma,
            tr.blowup_time
        );
    }

    // gamma0 = 0, a = -1/4: blow-up at pi sqrt 2 from m0 = 0
    let tr = integrate_characteristic(0.0, (0.0, 0.0), Sign::Plus, -0.25, 10.0, 1e-10).unwrap();
    println!("density zero: T = {:.6} (pi sqrt 2 = {:.6})", tr.blowup_time.unwrap(), std::f64::consts::PI * 2f64.sqrt());
}
