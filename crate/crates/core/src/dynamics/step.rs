//! Time integrators and the stability-limited step size.

use serde::{Deserialize, Serialize};

use super::rhs::ModelKind;
use crate::error::{Error, Result};
use crate::spectral::{Field, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Classical explicit four-stage Runge-Kutta.
    Rk4,
    /// Integrating-factor RK4: the model's linear symbol is integrated exactly.
    IfRk4,
}

impl Scheme {
    pub fn default_for(model: &ModelKind) -> Self {
        if model.linear_symbol().is_some() {
            Scheme::IfRk4
        } else {
            Scheme::Rk4
        }
    }
}

/// Explicit-stepping step size `cfl / ρ` from the linearized spectral radius
/// `ρ` of the model at `field`.
pub fn stable_dt(field: &Field, model: &ModelKind, cfl: f64) -> Result<f64> {
    stable_dt_for(field, model, cfl, Scheme::Rk4)
}

/// Like [`stable_dt`], dropping the stiff linear term when it is integrated
/// exactly by [`Scheme::IfRk4`].
pub fn stable_dt_for(field: &Field, model: &ModelKind, cfl: f64, scheme: Scheme) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::param(
            "cfl",
            format!("must lie in (0, 1], got {cfl}"),
        ));
    }
    let exact_linear = scheme == Scheme::IfRk4 && model.linear_symbol().is_some();
    let half = (field.len() / 2) as f64;
    let hu = field.spectrum().hilbert().to_field();
    let pairs = || field.values().iter().zip(hu.values());
    let max_of = |f: &dyn Fn(f64, f64) -> f64| pairs().map(|(&u, &h)| f(u, h)).fold(0.0, f64::max);

    let rho = match *model {
        ModelKind::Arctan | ModelKind::ViscousArctan { .. } => {
            let transport = half * max_of(&|u, h| u / (u * u + h * h))
                + half * max_of(&|u, h| h.abs() / (u * u + h * h));
            match *model {
                ModelKind::ViscousArctan { nu } if !exact_linear => transport + nu * half * half,
                _ => transport,
            }
        }
        ModelKind::Porous { m } => {
            let mf = m as f64;
            half * max_of(&|u, _| u.powi(-(m as i32)))
                + half * mf * max_of(&|u, h| h.abs() / u.powi(m as i32 + 1))
        }
        ModelKind::Cccf => {
            let n = field.len() as f64;
            let nonlinear = n * max_of(&|g, _| g.abs()) + half * max_of(&|_, h| h.abs());
            if exact_linear {
                nonlinear
            } else {
                half + nonlinear
            }
        }
    };
    if !rho.is_finite() {
        return Err(Error::BlowUpDetected {
            t: f64::NAN,
            reason: format!("spectral-radius estimate is {rho}"),
        });
    }
    Ok(cfl / rho)
}

fn finite(field: Field, stage: &str) -> Result<Field> {
    if field.is_finite() {
        Ok(field)
    } else {
        Err(Error::BlowUpDetected {
            t: f64::NAN,
            reason: format!("non-finite values in {stage}"),
        })
    }
}

fn positive_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::param(
            "dt",
            format!("must be finite and > 0, got {dt}"),
        ))
    }
}

/// One classical RK4 step of `∂_t u = rhs(u)`.
pub fn step_rk4<F>(field: &Field, dt: f64, rhs: F) -> Result<Field>
where
    F: Fn(&Field) -> Result<Field>,
{
    positive_dt(dt)?;
    let k1 = finite(rhs(field)?, "stage 1")?;
    let k2 = finite(rhs(&field.add_scaled(&k1, 0.5 * dt))?, "stage 2")?;
    let k3 = finite(rhs(&field.add_scaled(&k2, 0.5 * dt))?, "stage 3")?;
    let k4 = finite(rhs(&field.add_scaled(&k3, dt))?, "stage 4")?;
    let out = field
        .add_scaled(&k1, dt / 6.0)
        .add_scaled(&k2, dt / 3.0)
        .add_scaled(&k3, dt / 3.0)
        .add_scaled(&k4, dt / 6.0);
    finite(out, "update")
}

/// One integrating-factor RK4 step of `∂_t u = L u + N(u)`, with `L` the
/// Fourier multiplier `symbol(k)`. Exact when `N = 0`.
pub fn step_ifrk4<S, F>(field: &Field, dt: f64, symbol: S, nonlinear: F) -> Result<Field>
where
    S: Fn(i64) -> f64,
    F: Fn(&Field) -> Result<Field>,
{
    positive_dt(dt)?;
    let e_half = |s: &Spectrum| s.apply_real(|k| (0.5 * dt * symbol(k)).exp());
    let e_full = |s: &Spectrum| s.apply_real(|k| (dt * symbol(k)).exp());
    let eval = |s: &Spectrum, stage: &str| -> Result<Spectrum> {
        Ok(finite(nonlinear(&s.to_field())?, stage)?.spectrum())
    };

    let u = field.spectrum();
    let n1 = eval(&u, "stage 1")?;
    let n2 = eval(&e_half(&u.add_scaled(&n1, 0.5 * dt)), "stage 2")?;
    let n3 = eval(&e_half(&u).add_scaled(&n2, 0.5 * dt), "stage 3")?;
    let n4 = eval(&e_full(&u).add_scaled(&e_half(&n3), dt), "stage 4")?;
    let out = e_full(&u)
        .add_scaled(&e_full(&n1), dt / 6.0)
        .add_scaled(&e_half(&n2.add_scaled(&n3, 1.0)), dt / 3.0)
        .add_scaled(&n4, dt / 6.0);
    finite(out.to_field(), "update")
}
