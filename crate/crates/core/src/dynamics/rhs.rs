//! Right-hand sides `∂_t u = rhs(u)` of the four models.
//!
//! Nonlocal operators act in coefficient space; quotients are formed
//! pointwise. Pointwise results are projected back through one spectral pass
//! that removes the mean (all four right-hand sides are exact derivatives)
//! and, when dealiasing is on, applies the 2/3 rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    /// `∂_t u + ∂_x arctan(Hu/u) = 0`
    Arctan,
    /// `∂_t u + ∂_x arctan(Hu/u) = ν ∂_x² u`
    ViscousArctan { nu: f64 },
    /// `∂_t g + Λg = ∂_x(g Hg)`
    Cccf,
    /// `∂_t u + ∂_x(Hu / u^m) = 0`
    Porous { m: u32 },
}

impl ModelKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelKind::ViscousArctan { nu } if !(nu > 0.0 && nu.is_finite()) => Err(Error::param(
                "nu",
                format!("viscosity must be > 0, got {nu}"),
            )),
            ModelKind::Porous { m } if m < 1 => {
                Err(Error::param("m", "porous exponent must be >= 1"))
            }
            _ => Ok(()),
        }
    }

    pub fn requires_positive(&self) -> bool {
        !matches!(self, ModelKind::Cccf)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Arctan => "arctan",
            ModelKind::ViscousArctan { .. } => "viscous",
            ModelKind::Cccf => "cccf",
            ModelKind::Porous { .. } => "porous",
        }
    }

    /// Full right-hand side.
    pub fn rhs(&self, field: &Field, dealias: bool) -> Result<Field> {
        match *self {
            ModelKind::Arctan => arctan_rhs(field, dealias),
            ModelKind::ViscousArctan { nu } => {
                let base = arctan_rhs(field, dealias)?;
                Ok(base.add_scaled(&field.spectrum().second_derivative().to_field(), nu))
            }
            ModelKind::Cccf => Ok(cccf_rhs(field, dealias)),
            ModelKind::Porous { m } => porous_rhs(field, m, dealias),
        }
    }

    /// Real symbol `L(k)` of the stiff linear part handled exactly by the
    /// integrating factor, if the model has one.
    pub fn linear_symbol(&self) -> Option<Box<dyn Fn(i64) -> f64 + Send + Sync>> {
        match *self {
            ModelKind::ViscousArctan { nu } => Some(Box::new(move |k| -nu * (k * k) as f64)),
            ModelKind::Cccf => Some(Box::new(|k| -(k.abs() as f64))),
            _ => None,
        }
    }

    /// `rhs` minus the linear part returned by [`Self::linear_symbol`].
    pub fn nonlinear(&self, field: &Field, dealias: bool) -> Result<Field> {
        match *self {
            ModelKind::ViscousArctan { .. } => arctan_rhs(field, dealias),
            ModelKind::Cccf => Ok(cccf_nonlinear(field, dealias)),
            _ => self.rhs(field, dealias),
        }
    }
}

fn require_positive(field: &Field) -> Result<()> {
    let min = field.min();
    if min > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveField { min })
    }
}

fn project(spec: Spectrum, dealias: bool) -> Field {
    let spec = spec.without_mean();
    if dealias {
        spec.dealias().to_field()
    } else {
        spec.to_field()
    }
}

fn checked(field: Field) -> Result<Field> {
    if field.is_finite() {
        Ok(field)
    } else {
        Err(Error::BlowUpDetected {
            t: f64::NAN,
            reason: "non-finite right-hand side".into(),
        })
    }
}

/// `arctan(Hu/u)`, the flux of the transport equation.
pub fn velocity(field: &Field) -> Result<Field> {
    require_positive(field)?;
    let hu = field.spectrum().hilbert().to_field();
    Ok(field.zip_map(&hu, |u, h| (h / u).atan()))
}

/// `-(u Λu - Hu ∂_xu) / (u² + (Hu)²)` with the 2/3 filter.
pub fn rhs_arctan(field: &Field) -> Result<Field> {
    arctan_rhs(field, true)
}

pub(crate) fn arctan_rhs(field: &Field, dealias: bool) -> Result<Field> {
    require_positive(field)?;
    let spec = field.spectrum();
    let hu = spec.hilbert().to_field();
    let ux = spec.derivative().to_field();
    let lu = spec.lambda().to_field();
    let values: Vec<f64> = (0..field.len())
        .map(|j| {
            let (u, h) = (field.values()[j], hu.values()[j]);
            -(u * lu.values()[j] - h * ux.values()[j]) / (u * u + h * h)
        })
        .collect();
    checked(project(
        Field::from_raw(field.grid(), values).spectrum(),
        dealias,
    ))
}

/// `rhs_arctan + ν ∂_x² u`.
pub fn rhs_viscous(field: &Field, nu: f64) -> Result<Field> {
    let model = ModelKind::ViscousArctan { nu };
    model.validate()?;
    model.rhs(field, true)
}

/// `-Λg + ∂_x(g Hg)`.
pub fn rhs_cccf(field: &Field) -> Field {
    cccf_rhs(field, true)
}

fn cccf_rhs(field: &Field, dealias: bool) -> Field {
    let linear = field.spectrum().lambda().to_field();
    cccf_nonlinear(field, dealias).add_scaled(&linear, -1.0)
}

/// `∂_x(g Hg)`; the 2/3 rule is applied to the product.
fn cccf_nonlinear(field: &Field, dealias: bool) -> Field {
    let hg = field.spectrum().hilbert().to_field();
    let product = field.zip_map(&hg, |g, h| g * h).spectrum();
    let product = if dealias { product.dealias() } else { product };
    product.derivative().to_field()
}

/// `-∂_x(Hu/u^m)`, expanded as `-(Λu u^m - m Hu u^{m-1} ∂_xu) / u^{2m}`.
pub fn rhs_porous(field: &Field, m: u32) -> Result<Field> {
    let model = ModelKind::Porous { m };
    model.validate()?;
    porous_rhs(field, m, true)
}

fn porous_rhs(field: &Field, m: u32, dealias: bool) -> Result<Field> {
    require_positive(field)?;
    let spec = field.spectrum();
    let hu = spec.hilbert().to_field();
    let ux = spec.derivative().to_field();
    let lu = spec.lambda().to_field();
    let mf = m as f64;
    let values: Vec<f64> = (0..field.len())
        .map(|j| {
            let u = field.values()[j];
            // divide through by u^{2m}: Λu / u^m - m Hu ∂_xu / u^{m+1}
            let um = u.powi(m as i32);
            -(lu.values()[j] / um - mf * hu.values()[j] * ux.values()[j] / (um * u))
        })
        .collect();
    checked(project(
        Field::from_raw(field.grid(), values).spectrum(),
        dealias,
    ))
}
