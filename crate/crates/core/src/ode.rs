//! Dormand-Prince 5(4) with an embedded error estimate, for small fixed-size
//! systems.

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size {h:e} underflowed at t = {t} before the error estimate met tolerance")]
    ToleranceNotMet { t: f64, h: f64 },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Config {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Dopri5Config {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, max_steps: 1_000_000 }
    }
}

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
// fifth-order minus embedded fourth-order weights; the last entry multiplies the FSAL stage
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive integrator state.
#[derive(Debug, Clone)]
pub struct Dopri5<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    h: f64,
    fsal: Option<[f64; N]>,
    steps: usize,
    cfg: Dopri5Config,
}

fn combo<const N: usize>(y: &[f64; N], h: f64, ks: &[[f64; N]], w: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(w) {
        if c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new(t0: f64, y0: [f64; N], cfg: Dopri5Config) -> Self {
        Self { t: t0, y: y0, h: 0.0, fsal: None, steps: 0, cfg }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn initial_step<F: Fn(f64, &[f64; N]) -> [f64; N]>(&self, f0: &[f64; N]) -> f64 {
        let scale = |i: usize| self.cfg.atol + self.cfg.rtol * self.y[i].abs();
        let d0 = (0..N).map(|i| (self.y[i] / scale(i)).powi(2)).sum::<f64>().sqrt();
        let d1 = (0..N).map(|i| (f0[i] / scale(i)).powi(2)).sum::<f64>().sqrt();
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
    }

    /// Takes one accepted step, never past `t_max`.
    pub fn step<F: Fn(f64, &[f64; N]) -> [f64; N]>(&mut self, f: &F, t_max: f64) -> Result<(), OdeError> {
        if self.steps >= self.cfg.max_steps {
            return Err(OdeError::TooManySteps { t: self.t });
        }
        let k1 = match self.fsal {
            Some(k) => k,
            None => f(self.t, &self.y),
        };
        if self.h == 0.0 {
            self.h = self.initial_step::<F>(&k1);
        }
        loop {
            let remaining = t_max - self.t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if h <= 1e-14 * self.t.abs().max(1.0) && !last {
                return Err(OdeError::ToleranceNotMet { t: self.t, h });
            }
            let t = self.t;
            let y = &self.y;
            let k2 = f(t + C[0] * h, &combo(y, h, &[k1], &A2));
            let k3 = f(t + C[1] * h, &combo(y, h, &[k1, k2], &A3));
            let k4 = f(t + C[2] * h, &combo(y, h, &[k1, k2, k3], &A4));
            let k5 = f(t + C[3] * h, &combo(y, h, &[k1, k2, k3, k4], &A5));
            let k6 = f(t + C[4] * h, &combo(y, h, &[k1, k2, k3, k4, k5], &A6));
            let y_new = combo(y, h, &[k1, k2, k3, k4, k5, k6], &B);
            let k7 = f(t + h, &y_new);
            let ks = [k1, k2, k3, k4, k5, k6, k7];
            let mut err = 0.0;
            for i in 0..N {
                let e: f64 = h * ks.iter().zip(&E).map(|(k, w)| w * k[i]).sum::<f64>();
                let sc = self.cfg.atol + self.cfg.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                self.h = 0.25 * h;
                if self.h <= 1e-14 * self.t.abs().max(1.0) {
                    return Err(OdeError::NonFinite { t: self.t });
                }
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                self.t = if last { t_max } else { t + h };
                self.y = y_new;
                self.fsal = Some(k7);
                self.steps += 1;
                // a clipped final step should not shrink the next proposal
                self.h = if last { self.h.max(h * factor) } else { h * factor };
                return Ok(());
            }
            self.h = h * factor.min(1.0);
            if self.h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(OdeError::ToleranceNotMet { t: self.t, h: self.h });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut ode = Dopri5::new(0.0, [1.0], Dopri5Config::default());
        let f = |_t: f64, y: &[f64; 1]| [-y[0]];
        while ode.t < 2.0 {
            ode.step(&f, 2.0).unwrap();
        }
        assert_eq!(ode.t, 2.0);
        assert!((ode.y[0] - (-2.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_fifth_order() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut ode = Dopri5::new(0.0, [1.0, 0.0], Dopri5Config { rtol: 1e-12, atol: 1e-12, ..Default::default() });
        while ode.t < 10.0 {
            ode.step(&f, 10.0).unwrap();
        }
        assert!((ode.y[0] - 10f64.cos()).abs() < 1e-10);
        assert!((ode.y[1] + 10f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn singular_rhs_reports_failure() {
        // y' = y^2 from y = 1 blows up at t = 1; integrating past it must fail
        let f = |_t: f64, y: &[f64; 1]| [y[0] * y[0]];
        let mut ode = Dopri5::new(0.0, [1.0], Dopri5Config::default());
        let mut result = Ok(());
        while ode.t < 2.0 && result.is_ok() {
            result = ode.step(&f, 2.0);
        }
        assert!(result.is_err());
        assert!(ode.t < 1.0);
    }
}
