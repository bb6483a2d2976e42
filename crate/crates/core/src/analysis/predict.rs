use std::fmt;

use super::AnalysisError;
use crate::search::{periodic_min, periodic_zeros, ZeroSearch};
use crate::state::{InitialData, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    BlowUp,
    Global,
    SteadyState,
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::BlowUp => "BlowUp",
            Classification::Global => "Global",
            Classification::SteadyState => "SteadyState",
            Classification::Inconclusive => "Inconclusive",
        })
    }
}

/// Which criterion produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Justification {
    /// Constant data solving the system.
    ConstantSolution,
    /// `k = 1`, nontrivial data and a zero of the initial density.
    DensityZero,
    /// `k = 1`, initial density never vanishes.
    NonvanishingDensity,
    /// `k = -1`, `a < 0`.
    NegativeEnergy,
    /// `k = -1`, `a > 0` and a slope below `-sqrt(2a)`.
    SteepSlope,
    /// `k = -1`, `a = 0` and a nonpositive slope where the density is nonzero.
    CompressiveDensity,
    RuntimeDetection,
    None,
}

impl Justification {
    /// Tag used in verdict records.
    pub fn tag(self) -> &'static str {
        match self {
            Justification::ConstantSolution => "steady",
            Justification::DensityZero => "Thm4.1",
            Justification::NonvanishingDensity => "Thm5.1",
            Justification::NegativeEnergy => "Thm4.2(1)",
            Justification::SteepSlope => "Thm4.2(2)",
            Justification::CompressiveDensity => "Thm4.2(3)",
            Justification::RuntimeDetection => "runtime-detection",
            Justification::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub classification: Classification,
    pub justification: Justification,
    /// Upper bound on the blow-up time.
    pub time_bound: Option<f64>,
    /// Point (or parameter) supporting the classification.
    pub witness: Option<f64>,
}

impl Verdict {
    fn new(classification: Classification, justification: Justification) -> Self {
        Self { classification, justification, time_bound: None, witness: None }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "classification={} justification={}", self.classification, self.justification.tag())?;
        if let Some(w) = self.witness {
            write!(f, " witness={w:?}")?;
        }
        if let Some(b) = self.time_bound {
            write!(f, " time_bound={b:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PredictOptions {
    /// Allowed disagreement between the supplied and recomputed `a`.
    pub a_tol: f64,
    /// `|a|` at or below this counts as `a = 0`.
    pub a_zero_tol: f64,
    pub zeros: ZeroSearch,
    /// Lattice size for slope minimization.
    pub samples: usize,
}

impl Default for PredictOptions {
    fn default() -> Self {
        Self { a_tol: 1e-10, a_zero_tol: 1e-12, zeros: ZeroSearch::default(), samples: 4096 }
    }
}

pub fn predict(init: &InitialData, a: f64) -> Result<Verdict, AnalysisError> {
    predict_with(init, a, &PredictOptions::default())
}

/// `T < -2/m0` once the slope along a characteristic obeys `m' <= -m^2/2`.
fn riccati_bound(m0: f64) -> Option<f64> {
    (m0 < 0.0).then(|| -2.0 / m0)
}

pub fn predict_with(init: &InitialData, a: f64, opts: &PredictOptions) -> Result<Verdict, AnalysisError> {
    let computed = init.a_exact();
    if !((a - computed).abs() <= opts.a_tol) {
        return Err(AnalysisError::AMismatch { supplied: a, computed });
    }
    let (u0, rho0) = (&init.u0, &init.rho0);
    let slope = |x: f64| u0.derivative(x, 1);

    if u0.is_constant() && rho0.is_constant() {
        let residual = 0.5 * init.k.value() * rho0.constant * rho0.constant + a;
        if residual.abs() <= opts.a_zero_tol {
            return Ok(Verdict::new(Classification::SteadyState, Justification::ConstantSolution));
        }
    }

    match init.k {
        Sign::Plus => {
            let zeros = if rho0.is_odd() && !rho0.is_zero() {
                vec![0.0]
            } else if rho0.is_zero() {
                // every point is a zero; the steepest one gives the sharpest bound
                vec![periodic_min(slope, opts.samples, 1e-12).0]
            } else {
                periodic_zeros(|x| rho0.eval(x), opts.zeros)
            };
            if zeros.is_empty() {
                return Ok(Verdict::new(Classification::Global, Justification::NonvanishingDensity));
            }
            let nontrivial = !rho0.is_zero() || !u0.is_constant();
            if !nontrivial {
                return Ok(Verdict::new(Classification::Inconclusive, Justification::None));
            }
            let mut verdict = Verdict::new(Classification::BlowUp, Justification::DensityZero);
            verdict.witness = Some(zeros[0]);
            for &z in &zeros {
                if let Some(b) = riccati_bound(slope(z)) {
                    if verdict.time_bound.map_or(true, |cur| b < cur) {
                        verdict.time_bound = Some(b);
                        verdict.witness = Some(z);
                    }
                }
            }
            Ok(verdict)
        }
        Sign::Minus => {
            let (x_min, m0) = periodic_min(slope, opts.samples, 1e-12);
            if a < -opts.a_zero_tol {
                let mut v = Verdict::new(Classification::BlowUp, Justification::NegativeEnergy);
                v.witness = Some(x_min);
                v.time_bound = riccati_bound(m0);
                return Ok(v);
            }
            if a > opts.a_zero_tol {
                let c = (2.0 * a).sqrt();
                if m0 < -c {
                    let mut v = Verdict::new(Classification::BlowUp, Justification::SteepSlope);
                    v.witness = Some(x_min);
                    v.time_bound = Some(((m0 - c) / (m0 + c)).ln() / c);
                    return Ok(v);
                }
                return Ok(Verdict::new(Classification::Inconclusive, Justification::None));
            }
            // a = 0: need u0' <= 0 where rho0 does not vanish
            let nonzero = |x: f64| rho0.eval(x).abs() > opts.zeros.zero_tol;
            let witness = if m0 <= 0.0 && nonzero(x_min) {
                Some(x_min)
            } else {
                let h = 1.0 / opts.samples as f64;
                (0..opts.samples)
                    .map(|j| j as f64 * h)
                    .filter(|&x| slope(x) <= 0.0 && nonzero(x))
                    .min_by(|&x, &y| slope(x).total_cmp(&slope(y)))
            };
            match witness {
                Some(x0) => {
                    let mut v = Verdict::new(Classification::BlowUp, Justification::CompressiveDensity);
                    v.witness = Some(x0);
                    v.time_bound = riccati_bound(slope(x0));
                    Ok(v)
                }
                None => Ok(Verdict::new(Classification::Inconclusive, Justification::None)),
            }
        }
    }
}
