//! Pseudospectral simulation and blow-up analysis for the periodic
//! two-component Hunter-Saxton system
//!
//! ```text
//! u_txx + 2 u_x u_xx + u u_xxx - k rho rho_x = 0
//! rho_t + (rho u)_x = 0,        k = +1 or -1,  x on the unit circle
//! ```
//!
//! The pieces:
//!
//! * [`grid`]: Fourier collocation, differentiation, antiderivatives and
//!   off-grid interpolation.
//! * [`state`]: initial data as finite Fourier series and the conserved constant `a`.
//! * [`eulerian`]: RK4 integration of the nonlocal form with blow-up detectors.
//! * [`characteristics`]: the Riccati system along particle paths.
//! * [`analysis`]: static predictors, run diagnostics, blow-up time
//!   estimates and the Lyapunov certificate.
//! * [`cli`]: config parsing and the `predict`, `run` and `sweep` commands.

pub mod analysis;
pub mod characteristics;
pub mod cli;
pub mod config;
pub mod eulerian;
pub mod grid;
pub mod ode;
pub mod search;
pub mod state;

pub use analysis::{predict, scenario_monitor, Classification, DiagnosticsRecord, Verdict};
pub use eulerian::{run, run_with_tracers, step, Monitor, RunResult, SolverConfig, StepStatus};
pub use grid::{GridField, PeriodicGrid};
pub use state::{realize, FourierSeries, InitialData, Sign, SystemState};
