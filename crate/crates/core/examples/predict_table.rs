//! Static classification of a handful of initial data, no time stepping.

use std::f64::consts::TAU;

use hs2::{predict, FourierSeries, InitialData, Sign};

fn main() {
    let wave = FourierSeries::constant(0.0).with_mode(1, 0.0, 1.0 / TAU);
    let sin = FourierSeries::constant(0.0).with_mode(1, 0.0, 1.0);
    let cos = FourierSeries::constant(0.0).with_mode(1, 1.0, 0.0);
    let cases = [
        ("k=1  rho0=sin u0=0", InitialData::new(FourierSeries::default(), sin.clone(), Sign::Plus)),
        ("k=1  rho0=1+sin/2", InitialData::new(wave.clone(), FourierSeries::constant(1.0).with_mode(1, 0.0, 0.5), Sign::Plus)),
        ("k=-1 rho0=0", InitialData::new(wave.clone(), FourierSeries::default(), Sign::Minus)),
        ("k=-1 rho0=1", InitialData::new(wave.clone(), FourierSeries::constant(1.0), Sign::Minus)),
        ("k=-1 rho0=sin u0=0", InitialData::new(FourierSeries::default(), sin, Sign::Minus)),
        ("k=-1 rho0=cos", InitialData::new(wave, cos, Sign::Minus)),
        ("k=1  rho0=1 u0=0", InitialData::new(FourierSeries::default(), FourierSeries::constant(1.0), Sign::Plus)),
    ];
    for (name, init) in cases {
        let a = init.a_exact();
        let v = predict(&init, a).expect("a computed from the data");
        println!("{name:<22} a={a:+.4}  {v}");
    }
}
