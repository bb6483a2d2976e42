use super::{AnalysisError, DiagnosticsRecord};
use crate::characteristics::DecoupledCharacteristic;
use crate::eulerian::{BlowUpSignal, RunResult, StepStatus};
use crate::state::Sign;

/// Only samples with `min u_x` below this enter the slope fit.
pub const FIT_SLOPE_LEVEL: f64 = -10.0;
pub const FIT_MIN_SAMPLES: usize = 5;
/// How far past the last smooth sample the characteristic continuation may run.
const HANDOFF_HORIZON: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    /// Root of a least-squares line through `1 / min u_x`.
    SlopeFit,
    /// Continuation of the Riccati system from the last resolved minimum.
    Handoff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupEstimate {
    pub t_star: f64,
    /// Half-width of the uncertainty on `t_star`.
    pub ci: f64,
    pub method: EstimateMethod,
}

pub fn estimate_blowup_time(series: &[DiagnosticsRecord]) -> Result<BlowupEstimate, AnalysisError> {
    estimate_blowup_time_with(series, FIT_SLOPE_LEVEL, FIT_MIN_SAMPLES)
}

/// Fits `1 / min u_x` linearly in `t` over the samples below `level` and
/// returns the zero crossing. `ci` is two standard errors of the root,
/// propagated from the residual variance.
pub fn estimate_blowup_time_with(
    series: &[DiagnosticsRecord],
    level: f64,
    min_samples: usize,
) -> Result<BlowupEstimate, AnalysisError> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|r| r.min_ux.is_finite() && r.min_ux < level)
        .map(|r| (r.t, 1.0 / r.min_ux))
        .collect();
    let needed = min_samples.max(2);
    if pts.len() < needed {
        return Err(AnalysisError::InsufficientSamples { found: pts.len(), needed });
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::InsufficientSamples { found: 1, needed });
    }
    let slope = sxy / sxx;
    if !(slope > 0.0) {
        return Err(AnalysisError::NoBlowup);
    }
    let intercept = ym - slope * tm;
    let t_star = -intercept / slope;

    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let ci = if pts.len() > 2 {
        let s2 = ssr / (n - 2.0);
        // root = tm - ym/slope; var from ym and slope, which are uncorrelated
        let var_ym = s2 / n;
        let var_slope = s2 / sxx;
        let var = var_ym / (slope * slope) + (ym * ym) / slope.powi(4) * var_slope;
        2.0 * var.sqrt()
    } else {
        0.0
    };
    Ok(BlowupEstimate { t_star, ci, method: EstimateMethod::SlopeFit })
}

fn continue_from(r: &DiagnosticsRecord, k: Sign, a: f64) -> Result<f64, AnalysisError> {
    let mut ch = DecoupledCharacteristic::starting_at(r.argmin_ux, r.t, r.min_ux, r.rho_at_argmin, k, a, 1e-12);
    ch.advance_to(r.t + HANDOFF_HORIZON)?;
    ch.blowup_time().ok_or(AnalysisError::NoBlowup)
}

/// Blow-up time from integrating the characteristic system onward from the
/// last two resolved samples (no detector tripped). `ci` is the spread
/// between the two continuations.
pub fn handoff_blowup_time(series: &[DiagnosticsRecord], k: Sign, a: f64) -> Result<BlowupEstimate, AnalysisError> {
    let smooth: Vec<&DiagnosticsRecord> =
        series.iter().filter(|r| r.signal.is_none() && r.min_ux.is_finite()).collect();
    let last = *smooth.last().ok_or(AnalysisError::InsufficientSamples { found: 0, needed: 1 })?;
    let t_star = continue_from(last, k, a)?;
    let ci = match smooth.len() {
        0 | 1 => 0.0,
        len => continue_from(smooth[len - 2], k, a).map_or(0.0, |t| (t - t_star).abs()),
    };
    Ok(BlowupEstimate { t_star, ci, method: EstimateMethod::Handoff })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuntimeClass {
    Smooth,
    BlowUp,
    Inconclusive,
    Failed,
}

impl std::fmt::Display for RuntimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RuntimeClass::Smooth => "Smooth",
            RuntimeClass::BlowUp => "BlowUp",
            RuntimeClass::Inconclusive => "Inconclusive",
            RuntimeClass::Failed => "Failed",
        })
    }
}

/// Outcome of a run as seen by the blow-up criteria.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub status: StepStatus,
    pub class: RuntimeClass,
    /// Time at which the run stopped.
    pub stopped_at: f64,
    pub t_star: Option<BlowupEstimate>,
}

/// Classifies a finished run. A blow-up is declared only when `min u_x`
/// (or, for `k = -1`, `sup |rho_x|`) crossed its threshold, either in the
/// run itself or in the characteristic continuation from the last resolved
/// sample. Failures never count as blow-up.
pub fn summarize_run(result: &RunResult) -> RunSummary {
    let state = &result.final_state;
    let (k, a) = (state.k, state.a);
    let stopped_at = state.t;
    let estimate = || estimate_blowup_time(&result.records).or_else(|_| handoff_blowup_time(&result.records, k, a));
    match result.status {
        StepStatus::Smooth => RunSummary { status: result.status, class: RuntimeClass::Smooth, stopped_at, t_star: None },
        StepStatus::Failed(_) => RunSummary { status: result.status, class: RuntimeClass::Failed, stopped_at, t_star: None },
        StepStatus::BlowUpSuspected(signal) => {
            let crossed = signal == BlowUpSignal::SlopeThreshold
                || (k == Sign::Minus && signal == BlowUpSignal::DensityGradient);
            let est = estimate().ok();
            let class = if crossed || est.is_some() {
                RuntimeClass::BlowUp
            } else {
                RuntimeClass::Inconclusive
            };
            RunSummary { status: result.status, class, stopped_at, t_star: est }
        }
    }
}
