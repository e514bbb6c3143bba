//! Uniform periodic grid on the circle, discrete Fourier transforms and the
//! Fourier-multiplier operators (H, Λ, Λ^s, ∂_x, ∂_x²) built on them.
//!
//! Convention: `u(x_j) = Σ_k û(k) e^{i k x_j}` with `k = -n/2 .. n/2-1` and the
//! forward sum normalized by `1/n`. Coefficients are stored in FFT order, so
//! index `j` holds wavenumber `j` for `j < n/2` and `j - n` otherwise. The
//! Nyquist mode `k = -n/2` has no well-defined sign; every odd multiplier (and
//! every fractional power Λ^s, s ≠ 0) sends it to zero.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

/// `n` equispaced nodes `x_j = 2πj/n` on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodicGrid {
    n: usize,
}

impl PeriodicGrid {
    pub const MIN_NODES: usize = 8;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_NODES || !n.is_multiple_of(2) {
            return Err(Error::param(
                "n",
                format!("grid size must be even and >= {}, got {n}", Self::MIN_NODES),
            ));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Wavenumber stored at FFT index `j`.
    #[inline]
    pub fn wavenumber(&self, j: usize) -> i64 {
        let half = self.n / 2;
        if j < half {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// FFT index of wavenumber `k`, if it is representable on this grid.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k >= 0 && k < half {
            Some(k as usize)
        } else if k < 0 && k >= -half {
            Some((k + self.n as i64) as usize)
        } else {
            None
        }
    }

    #[inline]
    pub fn nyquist(&self) -> i64 {
        -((self.n / 2) as i64)
    }

    /// Index of the node mirrored through the origin, `x -> 2π - x`.
    #[inline]
    pub fn mirror(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }
}

/// Point values of a real function at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!(
                "non-finite value {} at node {j}",
                values[j]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn constant(grid: PeriodicGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Builds a field without the finiteness check; operator outputs of
    /// finite inputs stay finite except through quotients, which are checked
    /// by their callers.
    pub(crate) fn from_raw(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `⟨u⟩ = (1/2π) ∫ u dx`, computed by the trapezoid rule.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Field::from_raw(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, other: &Field, a: f64) -> Field {
        self.zip_map(other, |x, y| x + a * y)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.zip_map(other, |x, y| x - y)
    }

    pub fn scale(&self, a: f64) -> Field {
        self.map(|v| a * v)
    }

    pub fn shift(&self, c: f64) -> Field {
        self.map(|v| v + c)
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.sub(other)
            .values
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn spectrum(&self) -> Spectrum {
        transform(self)
    }
}

/// Fourier coefficients of a [`Field`], in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: PeriodicGrid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn from_coeffs(grid: PeriodicGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    #[inline]
    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    /// Coefficients in FFT order.
    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `û(k)`; zero for wavenumbers the grid cannot represent.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.grid
            .index_of(k)
            .map_or(Complex64::new(0.0, 0.0), |j| self.coeffs[j])
    }

    /// `(k, û(k))` pairs in FFT order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| (self.grid.wavenumber(j), c))
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Largest violation of `û(-k) = conj(û(k))` over `0 < k < n/2`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.len();
        (1..n / 2)
            .map(|j| (self.coeffs[n - j] - self.coeffs[j].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_field(&self) -> Field {
        inverse(self)
    }

    /// Multiplies every coefficient by `symbol(k)`.
    pub fn apply(&self, symbol: impl Fn(i64) -> Complex64) -> Spectrum {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * symbol(self.grid.wavenumber(j)))
            .collect();
        Spectrum {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn apply_real(&self, symbol: impl Fn(i64) -> f64) -> Spectrum {
        self.apply(|k| Complex64::new(symbol(k), 0.0))
    }

    pub fn add_scaled(&self, other: &Spectrum, a: f64) -> Spectrum {
        assert_eq!(self.grid, other.grid, "spectra live on different grids");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| x + y * a)
            .collect();
        Spectrum {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn scale(&self, a: f64) -> Spectrum {
        self.apply_real(|_| a)
    }

    /// Multiplier `-i sgn(k)`.
    pub fn hilbert(&self) -> Spectrum {
        let nyq = self.grid.nyquist();
        self.apply(|k| {
            if k == 0 || k == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -(k.signum() as f64))
            }
        })
    }

    /// Multiplier `i k`.
    pub fn derivative(&self) -> Spectrum {
        let nyq = self.grid.nyquist();
        self.apply(|k| {
            if k == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k as f64)
            }
        })
    }

    /// Multiplier `-k²`.
    pub fn second_derivative(&self) -> Spectrum {
        self.apply_real(|k| -((k * k) as f64))
    }

    /// Multiplier `|k|`.
    pub fn lambda(&self) -> Spectrum {
        let nyq = self.grid.nyquist();
        self.apply_real(|k| if k == nyq { 0.0 } else { k.abs() as f64 })
    }

    /// Multiplier `|k|^s`. For `s < 0` the field must have zero mean; the
    /// `k = 0` mode is then left at zero.
    pub fn fractional_lambda(&self, s: f64) -> Result<Spectrum> {
        if !s.is_finite() {
            return Err(Error::param("s", "exponent must be finite"));
        }
        if s == 0.0 {
            return Ok(self.clone());
        }
        if s < 0.0 {
            let mean = self.mean();
            if mean.abs() > mean_zero_tolerance(self) {
                return Err(Error::UndefinedInverse { s, mean });
            }
        }
        let nyq = self.grid.nyquist();
        Ok(self.apply_real(|k| {
            if k == 0 || k == nyq {
                0.0
            } else {
                (k.abs() as f64).powf(s)
            }
        }))
    }

    /// 2/3-rule truncation: zero every mode with `|k| > n/3`.
    pub fn dealias(&self) -> Spectrum {
        let n = self.grid.len() as i64;
        self.apply_real(|k| if 3 * k.abs() > n { 0.0 } else { 1.0 })
    }

    /// Heat-kernel mollifier, multiplier `exp(-eps k²)`.
    pub fn mollify(&self, eps: f64) -> Result<Spectrum> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::param(
                "eps",
                format!("must be finite and >= 0, got {eps}"),
            ));
        }
        Ok(self.apply_real(|k| (-eps * (k * k) as f64).exp()))
    }

    /// Sets the `k = 0` coefficient to zero.
    pub fn without_mean(&self) -> Spectrum {
        let mut out = self.clone();
        out.coeffs[0] = Complex64::new(0.0, 0.0);
        out
    }

    /// Trigonometric interpolant evaluated at an arbitrary point. The Nyquist
    /// mode contributes `Re û(-n/2) cos(n x / 2)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let nyq = self.grid.nyquist();
        self.modes()
            .map(|(k, c)| {
                if k == nyq {
                    c.re * ((k as f64) * x).cos()
                } else {
                    (c * Complex64::from_polar(1.0, k as f64 * x)).re
                }
            })
            .sum()
    }
}

fn mean_zero_tolerance(spec: &Spectrum) -> f64 {
    let scale = spec.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    1e-12 * scale
}

/// Forward transform, `û(k) = (1/n) Σ_j u_j e^{-i k x_j}`.
pub fn transform(field: &Field) -> Spectrum {
    let n = field.len();
    let mut buf: Vec<Complex64> = field
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    plan(n, true).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    for c in &mut buf {
        *c *= inv_n;
    }
    Spectrum {
        grid: field.grid(),
        coeffs: buf,
    }
}

/// Inverse transform, `u_j = Re Σ_k û(k) e^{i k x_j}`.
pub fn inverse(spectrum: &Spectrum) -> Field {
    let n = spectrum.grid.len();
    let mut buf = spectrum.coeffs.clone();
    plan(n, false).process(&mut buf);
    Field::from_raw(spectrum.grid, buf.into_iter().map(|c| c.re).collect())
}

pub fn hilbert(field: &Field) -> Field {
    field.spectrum().hilbert().to_field()
}

pub fn lambda_op(field: &Field) -> Field {
    field.spectrum().lambda().to_field()
}

pub fn fractional_lambda(field: &Field, s: f64) -> Result<Field> {
    Ok(field.spectrum().fractional_lambda(s)?.to_field())
}

pub fn derivative(field: &Field) -> Field {
    field.spectrum().derivative().to_field()
}

pub fn second_derivative(field: &Field) -> Field {
    field.spectrum().second_derivative().to_field()
}

pub fn dealias(field: &Field) -> Field {
    field.spectrum().dealias().to_field()
}

pub fn mollify(field: &Field, eps: f64) -> Result<Field> {
    if eps == 0.0 {
        return Ok(field.clone());
    }
    Ok(field.spectrum().mollify(eps)?.to_field())
}

/// Λu at every node from the singular-integral representation
/// `Λu(x) = (1/4π) p.v.∫ (u(x) - u(x-y)) / sin²(y/2) dy`.
///
/// The offset `y` runs over the staggered midpoints `(m + 1/2) dy`, a set
/// symmetric under `y -> -y`, so the odd `1/y` part of the kernel cancels in
/// pairs and the remaining even integrand is smooth. `u` must be callable at
/// arbitrary points. Cost is O(n²).
pub fn lambda_singular_integral(grid: PeriodicGrid, u: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = grid.len();
    let dy = grid.dx();
    let offsets: Vec<(f64, f64)> = (0..n)
        .map(|m| {
            let y = (m as f64 + 0.5) * dy;
            let s = (0.5 * y).sin();
            (y, 1.0 / (s * s))
        })
        .collect();
    (0..n)
        .map(|j| {
            let x = grid.node(j);
            let ux = u(x);
            let sum: f64 = offsets.iter().map(|&(y, w)| (ux - u(x - y)) * w).sum();
            sum * dy / (4.0 * PI)
        })
        .collect()
}

/// [`lambda_singular_integral`] for a sampled field, using its trigonometric
/// interpolant for the off-node values.
pub fn lambda_singular_integral_field(field: &Field) -> Field {
    let spec = field.spectrum();
    Field::from_raw(
        field.grid(),
        lambda_singular_integral(field.grid(), |x| spec.evaluate(x)),
    )
}
