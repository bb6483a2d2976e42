//! Static predictors, runtime monitors, blow-up time estimation and the
//! global-existence certificate.

mod blowup;
mod lyapunov;
mod monitor;
mod predict;

pub use blowup::{
    estimate_blowup_time, estimate_blowup_time_with, handoff_blowup_time, summarize_run, BlowupEstimate,
    EstimateMethod, RunSummary, RuntimeClass, FIT_MIN_SAMPLES, FIT_SLOPE_LEVEL,
};
pub use lyapunov::{certificate_constants, lyapunov_certificate, LyapunovMonitor, LyapunovRecord};
pub use monitor::{abs_integral, scenario_monitor, scenario_monitor_with, DiagnosticsRecord};
pub use predict::{predict, predict_with, Classification, Justification, PredictOptions, Verdict};

use crate::characteristics::CharError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("supplied a = {supplied} disagrees with a = {computed} recomputed from the data")]
    AMismatch { supplied: f64, computed: f64 },
    #[error("need at least {needed} samples below the fit level, found {found}")]
    InsufficientSamples { found: usize, needed: usize },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("continuation did not blow up within the horizon")]
    NoBlowup,
    #[error(transparent)]
    Characteristic(#[from] CharError),
}
