//! Lagrangian description along the flow `q_t = u(t, q)`, `q(0, x) = x`.
//!
//! Along a characteristic the slope `m = u_x(t, q)` and density
//! `gamma = rho(t, q)` obey a closed Riccati-type system
//!
//! ```text
//! m'     = (k/2) gamma^2 - m^2/2 + a
//! gamma' = -gamma m
//! (ln q_x)' = m
//! ```
//!
//! which is integrated autonomously here (decoupled mode). Positions `q`
//! need the Eulerian velocity and are advanced by the solver as a
//! [`TracerSet`] (coupled mode).

use crate::analysis::DiagnosticsRecord;
use crate::ode::{Dopri5, Dopri5Config, OdeError};
use crate::search::{periodic_min, periodic_zeros, ZeroSearch};
use crate::state::{InitialData, Sign, SystemState};

/// Slope below which a characteristic is declared to have blown up.
pub const DEFAULT_BLOWUP_SLOPE: f64 = -1e6;
/// `M(0)` below which the curvature transport check is skipped.
pub const DEGENERATE_MAX: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CharError {
    #[error("embedded error estimate could not reach tolerance: {0}")]
    ToleranceNotMet(#[from] OdeError),
    #[error("sup of u_xx^2 + rho_x^2 at t = 0 is {0:e}, too small to take logarithms")]
    DegenerateMax(f64),
    #[error("check requires {0}")]
    NotApplicable(&'static str),
    #[error("need at least two diagnostics samples")]
    TooFewSamples,
}

pub fn riccati_rhs(m: f64, gamma: f64, k: Sign, a: f64) -> (f64, f64) {
    (0.5 * k.value() * gamma * gamma - 0.5 * m * m + a, -gamma * m)
}

/// First integral `I = (m^2 - 2a)/gamma + k gamma` of the `(m, gamma)` system.
///
/// Undefined on `gamma = 0`.
pub fn riccati_invariant(m: f64, gamma: f64, k: Sign, a: f64) -> Option<f64> {
    (gamma != 0.0).then(|| (m * m - 2.0 * a) / gamma + k.value() * gamma)
}

/// Point of a single characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicState {
    pub x0: f64,
    /// Position reduced to `[0, 1)`.
    pub q: f64,
    /// Whole turns around the circle, so the unwrapped position is `q + winding`.
    pub winding: i64,
    pub m: f64,
    pub gamma: f64,
    pub log_qx: f64,
    /// `rho0(x0)`.
    pub rho0: f64,
}

impl CharacteristicState {
    pub fn qx(&self) -> f64 {
        self.log_qx.exp()
    }

    pub fn unwrapped_q(&self) -> f64 {
        self.q + self.winding as f64
    }
}

/// One accepted step of a decoupled integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianSample {
    pub t: f64,
    pub m: f64,
    pub gamma: f64,
    pub log_qx: f64,
}

/// `(m, gamma, ln q_x)` along one characteristic, advanced on demand.
#[derive(Debug, Clone)]
pub struct DecoupledCharacteristic {
    pub x0: f64,
    pub rho0: f64,
    k: Sign,
    a: f64,
    ode: Dopri5<3>,
    blowup_slope: f64,
    blowup_time: Option<f64>,
}

impl DecoupledCharacteristic {
    pub fn new(x0: f64, m0: f64, gamma0: f64, k: Sign, a: f64, tol: f64) -> Self {
        Self::starting_at(x0, 0.0, m0, gamma0, k, a, tol)
    }

    /// Starts from `(m, gamma)` observed at time `t0`, with `ln q_x = 0` there.
    pub fn starting_at(x0: f64, t0: f64, m: f64, gamma: f64, k: Sign, a: f64, tol: f64) -> Self {
        let cfg = Dopri5Config { rtol: tol, atol: tol, ..Default::default() };
        Self {
            x0,
            rho0: gamma,
            k,
            a,
            ode: Dopri5::new(t0, [m, gamma, 0.0], cfg),
            blowup_slope: DEFAULT_BLOWUP_SLOPE,
            blowup_time: None,
        }
    }

    pub fn with_blowup_slope(mut self, slope: f64) -> Self {
        self.blowup_slope = slope;
        self
    }

    pub fn from_initial_data(init: &InitialData, a: f64, x0: f64, tol: f64) -> Self {
        Self::new(x0, init.u0.derivative(x0, 1), init.rho0.eval(x0), init.k, a, tol)
    }

    pub fn sample(&self) -> LagrangianSample {
        let [m, gamma, log_qx] = self.ode.y;
        LagrangianSample { t: self.ode.t, m, gamma, log_qx }
    }

    pub fn blowup_time(&self) -> Option<f64> {
        self.blowup_time
    }

    /// One accepted adaptive step, not past `t_max`. Returns `false` once the
    /// characteristic has blown up.
    pub fn step(&mut self, t_max: f64) -> Result<bool, CharError> {
        if self.blowup_time.is_some() {
            return Ok(false);
        }
        let (k, a) = (self.k, self.a);
        let f = move |_t: f64, y: &[f64; 3]| {
            let (dm, dg) = riccati_rhs(y[0], y[1], k, a);
            [dm, dg, y[0]]
        };
        self.ode.step(&f, t_max)?;
        let m = self.ode.y[0];
        if m < self.blowup_slope {
            // 1/m(t) ~ 1/m(t1) + (t - t1)/2 near the singularity
            self.blowup_time = Some(self.ode.t - 2.0 / m);
            return Ok(false);
        }
        Ok(true)
    }

    /// Advances to `t`, stopping early at blow-up.
    pub fn advance_to(&mut self, t: f64) -> Result<LagrangianSample, CharError> {
        while self.ode.t < t && self.step(t)? {}
        Ok(self.sample())
    }
}

/// Output of [`integrate_characteristic`].
#[derive(Debug, Clone)]
pub struct CharacteristicTrajectory {
    pub x0: f64,
    pub samples: Vec<LagrangianSample>,
    pub blowup_time: Option<f64>,
}

impl CharacteristicTrajectory {
    pub fn last(&self) -> LagrangianSample {
        *self.samples.last().expect("trajectory always holds the initial point")
    }
}

/// Integrates one characteristic to `t_end` with absolute and relative
/// tolerance `tol`, recording every accepted step.
pub fn integrate_characteristic(
    x0: f64,
    init: (f64, f64),
    k: Sign,
    a: f64,
    t_end: f64,
    tol: f64,
) -> Result<CharacteristicTrajectory, CharError> {
    let mut ch = DecoupledCharacteristic::new(x0, init.0, init.1, k, a, tol);
    let mut samples = vec![ch.sample()];
    while ch.sample().t < t_end {
        let more = ch.step(t_end)?;
        samples.push(ch.sample());
        if !more {
            break;
        }
    }
    Ok(CharacteristicTrajectory { x0, samples, blowup_time: ch.blowup_time() })
}

/// Tracer positions advanced together with the Eulerian fields.
///
/// `q` is unwrapped (real line); `log_qx` integrates the interpolated `u_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracerSet {
    pub x0: Vec<f64>,
    pub q: Vec<f64>,
    pub log_qx: Vec<f64>,
}

impl TracerSet {
    pub fn new(seeds: &[f64]) -> Self {
        Self { x0: seeds.to_vec(), q: seeds.to_vec(), log_qx: vec![0.0; seeds.len()] }
    }

    pub fn len(&self) -> usize {
        self.x0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x0.is_empty()
    }

    /// Combines coupled positions with decoupled `(m, gamma, ln q_x)`.
    pub fn assemble(&self, decoupled: &[DecoupledCharacteristic]) -> Vec<CharacteristicState> {
        assert_eq!(decoupled.len(), self.len(), "one decoupled characteristic per tracer");
        self.q
            .iter()
            .zip(decoupled)
            .map(|(&q, ch)| {
                let s = ch.sample();
                CharacteristicState {
                    x0: ch.x0,
                    q: q.rem_euclid(1.0),
                    winding: q.floor() as i64,
                    m: s.m,
                    gamma: s.gamma,
                    log_qx: s.log_qx,
                    rho0: ch.rho0,
                }
            })
            .collect()
    }

    /// Same as [`assemble`](Self::assemble) but with the coupled `ln q_x`.
    pub fn coupled_states(&self, state: &SystemState, rho0: &[f64]) -> Vec<CharacteristicState> {
        let ux = state.grid().interpolant(&state.grid().derivative(state.u.values()));
        let rho = state.rho.interpolant();
        (0..self.len())
            .map(|i| {
                let q = self.q[i];
                CharacteristicState {
                    x0: self.x0[i],
                    q: q.rem_euclid(1.0),
                    winding: q.floor() as i64,
                    m: ux.eval(q),
                    gamma: rho.eval(q),
                    log_qx: self.log_qx[i],
                    rho0: rho0[i],
                }
            })
            .collect()
    }
}

/// Default seeds: `count` equispaced points, the argmin of `u0'` and every
/// zero of `rho0`, sorted and deduplicated.
pub fn default_seeds(init: &InitialData, count: usize) -> Vec<f64> {
    let mut seeds: Vec<f64> = (0..count).map(|j| j as f64 / count as f64).collect();
    if !init.u0.is_constant() {
        seeds.push(periodic_min(|x| init.u0.derivative(x, 1), 4096, 1e-12).0);
    }
    if !init.rho0.is_zero() {
        seeds.extend(periodic_zeros(|x| init.rho0.eval(x), ZeroSearch::default()));
    }
    seeds.sort_by(|a, b| a.total_cmp(b));
    seeds.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    seeds
}

/// `max |rho(t, q) q_x - rho0(x0)|` over the given characteristics.
pub fn verify_transport_identity(state: &SystemState, chars: &[CharacteristicState]) -> f64 {
    let rho = state.rho.interpolant();
    chars
        .iter()
        .map(|c| (rho.eval(c.q) * c.qx() - c.rho0).abs())
        .fold(0.0, f64::max)
}

/// Compares `ln M(t) - ln M(0)` with `-4 int_0^t u_x(s, xi(s)) ds`, where
/// `M = sup (u_xx^2 + rho_x^2)` is attained at `xi`. Returns the largest
/// discrepancy over the samples.
pub fn curvature_transport_check(records: &[DiagnosticsRecord], k: Sign) -> Result<f64, CharError> {
    if k != Sign::Plus {
        return Err(CharError::NotApplicable("k = 1"));
    }
    if records.len() < 2 {
        return Err(CharError::TooFewSamples);
    }
    let m0 = records[0].m_sup.ok_or(CharError::NotApplicable("curvature samples"))?;
    if m0 < DEGENERATE_MAX {
        return Err(CharError::DegenerateMax(m0));
    }
    let mut integral = 0.0;
    let mut worst: f64 = 0.0;
    for pair in records.windows(2) {
        let (r0, r1) = (&pair[0], &pair[1]);
        integral += 0.5 * (r1.t - r0.t) * (r0.ux_at_xi + r1.ux_at_xi);
        let m = r1.m_sup.ok_or(CharError::NotApplicable("curvature samples"))?;
        let lhs = (m / m0).ln();
        worst = worst.max((lhs + 4.0 * integral).abs());
    }
    Ok(worst)
}
