//! Initial data, the evolving state and its conserved quantities.

use std::f64::consts::TAU;
use std::fmt;

use crate::grid::{GridError, GridField, PeriodicGrid};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("{field}: mode {mode} is not below n/3 for n = {n}")]
    ModeTooHigh { field: &'static str, mode: u32, n: usize },
    #[error("{field}: mode index must be at least 1")]
    ZeroMode { field: &'static str },
    #[error("{0}: non-finite coefficient")]
    NonFinite(&'static str),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// The coupling sign `k` in front of the density term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_int(k: i64) -> Option<Self> {
        match k {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("1"),
            Sign::Minus => f.write_str("-1"),
        }
    }
}

/// One term `a cos(2 pi m x) + b sin(2 pi m x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub mode: u32,
    pub cos: f64,
    pub sin: f64,
}

/// Finite real Fourier series on the unit circle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierSeries {
    pub constant: f64,
    pub modes: Vec<FourierMode>,
}

impl FourierSeries {
    pub fn constant(c: f64) -> Self {
        Self { constant: c, modes: Vec::new() }
    }

    pub fn with_mode(mut self, mode: u32, cos: f64, sin: f64) -> Self {
        self.modes.push(FourierMode { mode, cos, sin });
        self
    }

    /// `order`-th derivative at `x`.
    pub fn derivative(&self, x: f64, order: u32) -> f64 {
        let mut v = if order == 0 { self.constant } else { 0.0 };
        for m in &self.modes {
            let w = TAU * m.mode as f64;
            let (s, c) = (w * x).sin_cos();
            // d^p/dx^p of (a cos + b sin) cycles through (c, -s, -c, s) scaled by w^p
            let (dc, ds) = match order % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            v += w.powi(order as i32) * (m.cos * dc + m.sin * ds);
        }
        v
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    pub fn max_mode(&self) -> u32 {
        self.modes.iter().map(|m| m.mode).max().unwrap_or(0)
    }

    fn has_oscillation(&self) -> bool {
        self.modes.iter().any(|m| m.cos != 0.0 || m.sin != 0.0)
    }

    /// True when every non-constant coefficient is zero.
    pub fn is_constant(&self) -> bool {
        !self.has_oscillation()
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.is_constant()
    }

    /// Odd series: no constant and no cosine terms.
    pub fn is_odd(&self) -> bool {
        self.constant == 0.0 && self.modes.iter().all(|m| m.cos == 0.0)
    }

    /// Coefficients merged by mode, so repeated entries add.
    fn merged(&self) -> Vec<(u32, f64, f64)> {
        let mut out: Vec<(u32, f64, f64)> = Vec::new();
        for m in &self.modes {
            match out.iter_mut().find(|e| e.0 == m.mode) {
                Some(e) => {
                    e.1 += m.cos;
                    e.2 += m.sin;
                }
                None => out.push((m.mode, m.cos, m.sin)),
            }
        }
        out
    }

    /// `int_S f^2` by Parseval.
    pub fn mean_square(&self) -> f64 {
        self.constant * self.constant
            + self.merged().iter().map(|(_, a, b)| 0.5 * (a * a + b * b)).sum::<f64>()
    }

    /// `int_S (f')^2` by Parseval.
    pub fn derivative_mean_square(&self) -> f64 {
        self.merged()
            .iter()
            .map(|(m, a, b)| {
                let w = TAU * *m as f64;
                0.5 * w * w * (a * a + b * b)
            })
            .sum()
    }

    pub fn sample(&self, grid: &PeriodicGrid) -> GridField {
        GridField::from_fn(grid, |x| self.eval(x))
    }

    fn validate(&self, field: &'static str, n: usize) -> Result<(), StateError> {
        if !self.constant.is_finite() {
            return Err(StateError::NonFinite(field));
        }
        for m in &self.modes {
            if m.mode == 0 {
                return Err(StateError::ZeroMode { field });
            }
            if !(m.cos.is_finite() && m.sin.is_finite()) {
                return Err(StateError::NonFinite(field));
            }
            if 3 * m.mode as usize >= n {
                return Err(StateError::ModeTooHigh { field, mode: m.mode, n });
            }
        }
        Ok(())
    }
}

/// Initial velocity and density together with the coupling sign.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub u0: FourierSeries,
    pub rho0: FourierSeries,
    pub k: Sign,
}

impl InitialData {
    pub fn new(u0: FourierSeries, rho0: FourierSeries, k: Sign) -> Self {
        Self { u0, rho0, k }
    }

    /// `a = -(1/2) int (k rho0^2 + u0'^2)`, evaluated exactly from the coefficients.
    pub fn a_exact(&self) -> f64 {
        -0.5 * (self.k.value() * self.rho0.mean_square() + self.u0.derivative_mean_square())
    }

    pub fn validate_for(&self, grid: &PeriodicGrid) -> Result<(), StateError> {
        self.u0.validate("u0", grid.n())?;
        self.rho0.validate("rho0", grid.n())
    }
}

/// Fields `u`, `rho` at time `t`, with the constants that close the nonlocal form.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub t: f64,
    pub u: GridField,
    pub rho: GridField,
    pub k: Sign,
    /// The conserved constant fixed at `t = 0`.
    pub a: f64,
    /// Constant gauge value added to the velocity tendency.
    pub h: f64,
}

impl SystemState {
    pub fn grid(&self) -> &PeriodicGrid {
        self.u.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.u.is_finite() && self.rho.is_finite()
    }
}

/// Conserved quantities evaluated on a snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedSet {
    pub a_now: f64,
    pub int_abs_rho: f64,
    /// `int (u_x^2 + k rho^2)`, identically `-2 a_now`.
    pub energy: f64,
}

/// Samples the initial data and fixes `a` by quadrature.
pub fn realize(init: &InitialData, grid: &PeriodicGrid, h: f64) -> Result<SystemState, StateError> {
    init.validate_for(grid)?;
    let u = init.u0.sample(grid);
    let rho = init.rho0.sample(grid);
    let a = a_of(grid, u.values(), rho.values(), init.k);
    Ok(SystemState { t: 0.0, u, rho, k: init.k, a, h })
}

pub(crate) fn a_of(grid: &PeriodicGrid, u: &[f64], rho: &[f64], k: Sign) -> f64 {
    let ux = grid.derivative(u);
    let kv = k.value();
    let density: f64 = ux.iter().zip(rho).map(|(d, r)| kv * r * r + d * d).sum();
    -0.5 * density / grid.n() as f64
}

pub fn conserved(state: &SystemState) -> ConservedSet {
    let grid = state.grid();
    let a_now = a_of(grid, state.u.values(), state.rho.values(), state.k);
    let int_abs_rho = grid.integrate(&state.rho.values().iter().map(|r| r.abs()).collect::<Vec<_>>());
    ConservedSet { a_now, int_abs_rho, energy: -2.0 * a_now }
}
