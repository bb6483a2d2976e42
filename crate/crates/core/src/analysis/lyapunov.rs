use super::{AnalysisError, DiagnosticsRecord};
use crate::characteristics::{CharacteristicState, DecoupledCharacteristic};
use crate::eulerian::{Monitor, Sample};
use crate::search::{periodic_max, periodic_min};
use crate::state::{InitialData, Sign, SystemState};

/// Growth certificate for a nonvanishing initial density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovRecord {
    pub t: f64,
    /// Largest `w = gamma gamma0 + (gamma0/gamma)(1 + m^2)` over the characteristics.
    pub w_max: f64,
    /// `c1 exp(|1 + 2a| t)`.
    pub bound: f64,
    /// `-bound / (2 beta)`.
    pub ux_lower_bound: f64,
    /// `min |rho0|`.
    pub beta: f64,
    /// `1 + max(rho0^2 + u0'^2)`.
    pub c1: f64,
}

/// `(beta, c1)` for `init`; fails unless `k = 1` and `rho0` never vanishes.
pub fn certificate_constants(init: &InitialData) -> Result<(f64, f64), AnalysisError> {
    if init.k != Sign::Plus {
        return Err(AnalysisError::NotApplicable("certificate needs k = 1"));
    }
    let (_, beta) = periodic_min(|x| init.rho0.eval(x).abs(), 4096, 1e-13);
    if !(beta > 0.0) {
        return Err(AnalysisError::NotApplicable("certificate needs a nonvanishing initial density"));
    }
    let (_, peak) = periodic_max(
        |x| {
            let (r, s) = (init.rho0.eval(x), init.u0.derivative(x, 1));
            r * r + s * s
        },
        4096,
        1e-13,
    );
    Ok((beta, 1.0 + peak))
}

fn weight(c: &CharacteristicState) -> f64 {
    c.gamma * c.rho0 + c.rho0 / c.gamma * (1.0 + c.m * c.m)
}

/// Evaluates the certificate at `state.t` over characteristics already
/// advanced to that time.
pub fn lyapunov_certificate(
    state: &SystemState,
    init: &InitialData,
    chars: &[CharacteristicState],
) -> Result<LyapunovRecord, AnalysisError> {
    if state.k != Sign::Plus {
        return Err(AnalysisError::NotApplicable("certificate needs k = 1"));
    }
    let (beta, c1) = certificate_constants(init)?;
    let w_max = chars.iter().map(weight).fold(f64::NEG_INFINITY, f64::max);
    let bound = c1 * ((1.0 + 2.0 * state.a).abs() * state.t).exp();
    Ok(LyapunovRecord { t: state.t, w_max, bound, ux_lower_bound: -bound / (2.0 * beta), beta, c1 })
}

/// Run hook filling the certificate columns, with characteristics
/// integrated independently of the Eulerian fields.
pub struct LyapunovMonitor {
    init: InitialData,
    chars: Vec<DecoupledCharacteristic>,
    last: Option<LyapunovRecord>,
}

impl LyapunovMonitor {
    pub fn new(init: &InitialData, a: f64, seeds: &[f64]) -> Result<Self, AnalysisError> {
        certificate_constants(init)?;
        let chars = seeds.iter().map(|&x| DecoupledCharacteristic::from_initial_data(init, a, x, 1e-11)).collect();
        Ok(Self { init: init.clone(), chars, last: None })
    }

    pub fn last(&self) -> Option<&LyapunovRecord> {
        self.last.as_ref()
    }

    fn evaluate(&mut self, state: &SystemState) -> Result<LyapunovRecord, AnalysisError> {
        let mut states = Vec::with_capacity(self.chars.len());
        for ch in &mut self.chars {
            let s = ch.advance_to(state.t)?;
            states.push(CharacteristicState {
                x0: ch.x0,
                q: ch.x0,
                winding: 0,
                m: s.m,
                gamma: s.gamma,
                log_qx: s.log_qx,
                rho0: ch.rho0,
            });
        }
        lyapunov_certificate(state, &self.init, &states)
    }
}

impl Monitor for LyapunovMonitor {
    fn observe(&mut self, sample: &Sample<'_>, record: &mut DiagnosticsRecord) {
        if let Ok(rec) = self.evaluate(sample.state) {
            record.w_max = Some(rec.w_max);
            record.w_bound = Some(rec.bound);
            record.ux_lower_bound = Some(rec.ux_lower_bound);
            self.last = Some(rec);
        }
    }
}
