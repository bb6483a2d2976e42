//! Spectral toolkit on the unit circle `S = R/Z`.
//!
//! Fields are sampled at the nodes `x_j = j/n` and manipulated through their
//! discrete Fourier coefficients. With `X_k` the unnormalized forward
//! transform, the trigonometric interpolant is
//!
//! ```text
//! f(x) = sum_{|k| < n/2} c_k e^{2 pi i k x} + c_{n/2} cos(pi n x),   c_k = X_k / n
//! ```
//!
//! Derivatives drop the Nyquist term, so `derivative` on the grid and the
//! derivative of the interpolant agree everywhere.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Default absolute tolerance on the mean of an integrand passed to
/// [`PeriodicGrid::antiderivative_from_zero`].
pub const DEFAULT_MEAN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid size {0} must be even and at least 16")]
    InvalidSize(usize),
    #[error("integrand mean {mean:e} exceeds tolerance {tol:e}")]
    MeanNotZero { mean: f64, tol: f64 },
    #[error("field has {got} samples, grid has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

struct Plans {
    n: usize,
    cutoff: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform sampling of the unit circle together with its FFT plans.
///
/// Cloning is cheap; clones share the plans.
#[derive(Clone)]
pub struct PeriodicGrid {
    plans: Arc<Plans>,
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("n", &self.plans.n)
            .field("dealias_cutoff", &self.plans.cutoff)
            .finish()
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.plans.n == other.plans.n
    }
}

impl PeriodicGrid {
    pub fn new(n: usize) -> Result<Self, GridError> {
        if n < 16 || n % 2 != 0 {
            return Err(GridError::InvalidSize(n));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            plans: Arc::new(Plans {
                n,
                cutoff: n / 3,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.plans.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.plans.n as f64
    }

    /// Highest mode kept by the 2/3-rule filter.
    pub fn dealias_cutoff(&self) -> usize {
        self.plans.cutoff
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.plans.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.plans.n).map(|j| self.node(j)).collect()
    }

    /// Signed wavenumber of FFT slot `idx`. The Nyquist slot maps to `n/2`.
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.plans.n;
        if idx <= n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        }
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.plans.n).map(|j| f(self.node(j))).collect()
    }

    fn check_len(&self, f: &[f64]) {
        assert_eq!(f.len(), self.plans.n, "field length does not match grid");
    }

    /// Unnormalized forward transform.
    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        self.check_len(f);
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.plans.forward.process(&mut buf);
        buf
    }

    /// Inverse of [`forward`](Self::forward), including the `1/n` factor.
    pub fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.plans.inverse.process(&mut spec);
        let scale = 1.0 / self.plans.n as f64;
        spec.into_iter().map(|c| c.re * scale).collect()
    }

    /// Multiplies a spectrum by `(2 pi i k)^order`, zeroing the Nyquist slot.
    pub fn differentiate_spectrum(&self, spec: &mut [Complex64], order: u32) {
        if order == 0 {
            return;
        }
        let n = self.plans.n;
        for (idx, c) in spec.iter_mut().enumerate() {
            if idx == n / 2 {
                *c = Complex64::new(0.0, 0.0);
                continue;
            }
            let ik = Complex64::new(0.0, TAU * self.wavenumber(idx) as f64);
            *c *= ik.powu(order);
        }
    }

    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        self.derivative_n(f, 1)
    }

    pub fn derivative_n(&self, f: &[f64], order: u32) -> Vec<f64> {
        let mut spec = self.forward(f);
        self.differentiate_spectrum(&mut spec, order);
        self.inverse(spec)
    }

    /// Zeroes every mode above the 2/3-rule cutoff.
    pub fn filter_spectrum(&self, spec: &mut [Complex64]) {
        let cutoff = self.plans.cutoff as i64;
        for (idx, c) in spec.iter_mut().enumerate() {
            if self.wavenumber(idx).abs() > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn dealias(&self, f: &[f64]) -> Vec<f64> {
        let mut spec = self.forward(f);
        self.filter_spectrum(&mut spec);
        self.inverse(spec)
    }

    /// `G(x) = int_0^x g(y) dy` for a mean-zero `g`.
    ///
    /// The result satisfies `G(0) = 0` exactly and is 1-periodic.
    pub fn antiderivative_from_zero(&self, g: &[f64], mean_tol: f64) -> Result<Vec<f64>, GridError> {
        let mean = self.integrate(g);
        if mean.abs() > mean_tol || !mean.is_finite() {
            return Err(GridError::MeanNotZero { mean, tol: mean_tol });
        }
        Ok(self.antiderivative_projected(g))
    }

    /// Antiderivative of `g - mean(g)`, pinned to zero at the origin.
    pub(crate) fn antiderivative_projected(&self, g: &[f64]) -> Vec<f64> {
        let mut spec = self.forward(g);
        self.integrate_spectrum(&mut spec);
        let mut out = self.inverse(spec);
        let g0 = out[0];
        for v in &mut out {
            *v -= g0;
        }
        out[0] = 0.0;
        out
    }

    fn integrate_spectrum(&self, spec: &mut [Complex64]) {
        let n = self.plans.n;
        for (idx, c) in spec.iter_mut().enumerate() {
            if idx == 0 || idx == n / 2 {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c /= Complex64::new(0.0, TAU * self.wavenumber(idx) as f64);
            }
        }
    }

    /// Mean-rule quadrature over one period.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.check_len(f);
        f.iter().sum::<f64>() / self.plans.n as f64
    }

    pub fn interpolant(&self, f: &[f64]) -> SpectralInterpolant {
        SpectralInterpolant::from_spectrum(self, &self.forward(f))
    }

    pub fn interpolate(&self, f: &[f64], points: &[f64]) -> Vec<f64> {
        let interp = self.interpolant(f);
        points.iter().map(|&x| interp.eval(x)).collect()
    }

    /// Fraction of spectral energy in the top third of the band `|k| <= cutoff`.
    pub fn tail_energy(&self, spec: &[Complex64], cutoff: usize) -> (f64, f64) {
        let lower = (2 * cutoff) as i64 / 3;
        let cutoff = cutoff as i64;
        let mut tail = 0.0;
        let mut total = 0.0;
        for (idx, c) in spec.iter().enumerate() {
            let e = c.norm_sqr();
            total += e;
            let k = self.wavenumber(idx).abs();
            if k > lower && k <= cutoff {
                tail += e;
            }
        }
        (tail, total)
    }
}

/// Trigonometric interpolant evaluated off-grid by Horner's rule in
/// `z = e^{2 pi i x}`.
#[derive(Debug, Clone)]
pub struct SpectralInterpolant {
    /// `c_k` for `k = 0..n/2`, normalized.
    coeffs: Vec<Complex64>,
}

impl SpectralInterpolant {
    pub fn from_spectrum(grid: &PeriodicGrid, spec: &[Complex64]) -> Self {
        let n = grid.n();
        let scale = 1.0 / n as f64;
        let coeffs = spec[..=n / 2].iter().map(|c| c * scale).collect();
        Self { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_derivative(x, 0)
    }

    /// `d^order f / dx^order` of the interpolant at `x`.
    pub fn eval_derivative(&self, x: f64, order: u32) -> f64 {
        let x = x.rem_euclid(1.0);
        let half = self.coeffs.len() - 1;
        let z = Complex64::from_polar(1.0, TAU * x);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..half).rev() {
            let mut c = self.coeffs[k];
            if order > 0 {
                c *= Complex64::new(0.0, TAU * k as f64).powu(order);
            }
            acc = acc * z + c;
        }
        acc *= z;
        let mut value = 2.0 * acc.re;
        if order == 0 {
            value += self.coeffs[0].re;
            let nyq = self.coeffs[half].re;
            value += nyq * (std::f64::consts::PI * (2 * half) as f64 * x).cos();
        }
        value
    }
}

/// Samples of a 1-periodic function on a [`PeriodicGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.n() {
            return Err(GridError::LengthMismatch { expected: grid.n(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: &PeriodicGrid, f: F) -> Self {
        let values = grid.sample(f);
        Self { grid: grid.clone(), values }
    }

    pub fn zeros(grid: &PeriodicGrid) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.n()] }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn derivative(&self) -> GridField {
        GridField { grid: self.grid.clone(), values: self.grid.derivative(&self.values) }
    }

    pub fn antiderivative_from_zero(&self, mean_tol: f64) -> Result<GridField, GridError> {
        let values = self.grid.antiderivative_from_zero(&self.values, mean_tol)?;
        Ok(GridField { grid: self.grid.clone(), values })
    }

    pub fn integrate(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    pub fn interpolate(&self, points: &[f64]) -> Vec<f64> {
        self.grid.interpolate(&self.values, points)
    }

    pub fn interpolant(&self) -> SpectralInterpolant {
        self.grid.interpolant(&self.values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> GridField {
        GridField { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }
}
