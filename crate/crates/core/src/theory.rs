//! Small-data majorants and their thresholds.
//!
//! `F(r)` bounds the nonlinear terms of the `A¹` estimate relative to the
//! linear damping, `r = ‖u - ⟨u⟩‖_{A¹} / ⟨u⟩`; `G(s)` does the same for the
//! `A⁰` estimate with `s = ‖u - ⟨u⟩‖_{A⁰} / ⟨u⟩`. Decay is guaranteed while the
//! majorant stays below one, so the thresholds are the points where each
//! crosses one. Both are only meaningful on `[0, 1/2)`, where
//! `z = r/(1-r) < 1`.

use num_rational::Ratio;
use std::ops::{Add, Div, Mul, Sub};

use crate::error::{Error, Result};

/// Minimal field arithmetic so the closed forms can be evaluated in `f64`
/// and in exact rationals.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_int(v: i64) -> Self;
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Scalar for Ratio<i128> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

/// Closed form of `F(r)`.
pub fn f_closed<T: Scalar>(r: T) -> T {
    let one = T::from_int(1);
    let two = T::from_int(2);
    let q = one - r;
    let z = r / q;
    let z2 = z * z;
    let q3 = q * q * q;
    let q4 = q3 * q;
    let d = one - z2;
    two * z / (d * d) * (r / q3 + r / q4)
        + z2 / (one - two * r)
        + two * z2 / d / q3
        + z
        + r / (q * q)
}

/// Closed form of `G(s)`.
pub fn g_closed<T: Scalar>(s: T) -> T {
    let one = T::from_int(1);
    let q = one - s;
    let z = s / q;
    let tail = z * z / (one - z * z);
    s / (q * q) + s / q + s / (q * q) * tail + one / q * tail
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantResult {
    pub argument: f64,
    pub value: f64,
    /// The internal ratio `z = x/(1-x)` is below one and the value is finite.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Majorant {
    /// Strong-solution majorant, argument `r`.
    F,
    /// Weak-solution majorant, argument `s`.
    G,
}

impl Majorant {
    pub fn name(&self) -> &'static str {
        match self {
            Majorant::F => "F",
            Majorant::G => "G",
        }
    }

    pub fn eval(&self, x: f64) -> Result<MajorantResult> {
        if !(0.0..0.5).contains(&x) {
            return Err(Error::param(
                if *self == Majorant::F { "r" } else { "s" },
                format!("argument must lie in [0, 1/2), got {x}"),
            ));
        }
        let value = match self {
            Majorant::F => f_closed(x),
            Majorant::G => g_closed(x),
        };
        Ok(MajorantResult {
            argument: x,
            value,
            converged: value.is_finite() && x / (1.0 - x) < 1.0,
        })
    }
}

pub fn eval_f(r: f64) -> Result<f64> {
    Majorant::F.eval(r).map(|m| m.value)
}

pub fn eval_g(s: f64) -> Result<f64> {
    Majorant::G.eval(s).map(|m| m.value)
}

/// Upper end of the bisection search interval.
pub const THRESHOLD_SEARCH_MAX: f64 = 0.45;

/// Bisection bracket `[lo, hi]` around the point where the majorant crosses
/// one, with `hi - lo <= tol` and `M(lo) < 1 <= M(hi)`.
pub fn threshold(majorant: Majorant, tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("must be > 0, got {tol}")));
    }
    let value = |x: f64| majorant.eval(x).map(|m| m.value);
    let (mut lo, mut hi) = (0.0, THRESHOLD_SEARCH_MAX);
    if !(value(lo)? < 1.0 && value(hi)? >= 1.0) {
        return Err(Error::param(
            "majorant",
            format!("{} does not cross 1 on [0, {hi}]", majorant.name()),
        ));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if value(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Fraction of leading samples skipped by [`fit_decay_rate`].
pub const DEFAULT_TRANSIENT_FRACTION: f64 = 0.1;

/// Least-squares slope `δ` of `-log(value)` against `t`, skipping the first
/// 10% of samples.
pub fn fit_decay_rate(series: &[(f64, f64)]) -> Result<f64> {
    fit_decay_rate_with(series, DEFAULT_TRANSIENT_FRACTION)
}

pub fn fit_decay_rate_with(series: &[(f64, f64)], skip_fraction: f64) -> Result<f64> {
    if series.len() < 3 {
        return Err(Error::param("series", "need at least 3 samples"));
    }
    if !(0.0..1.0).contains(&skip_fraction) {
        return Err(Error::param("skip_fraction", "must lie in [0, 1)"));
    }
    if series.iter().any(|&(_, v)| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::param("series", "values must be finite and > 0"));
    }
    if series.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::param("series", "times must be strictly increasing"));
    }
    let skip = ((series.len() as f64) * skip_fraction).floor() as usize;
    let kept = &series[skip.min(series.len() - 2)..];
    let m = kept.len() as f64;
    let t_mean = kept.iter().map(|p| p.0).sum::<f64>() / m;
    let y_mean = kept.iter().map(|p| -p.1.ln()).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, v) in kept {
        let dt = t - t_mean;
        sxy += dt * (-v.ln() - y_mean);
        sxx += dt * dt;
    }
    Ok(sxy / sxx)
}
