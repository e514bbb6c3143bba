use serde::{Deserialize, Serialize};

use super::rhs::ModelKind;
use super::step::{stable_dt_for, step_ifrk4, step_rk4, Scheme};
use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::spectral::{mollify, Field, PeriodicGrid};

/// Fraction of the initial minimum below which a positivity-requiring run is
/// aborted.
pub const POSITIVITY_GUARD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k: u32,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialProfile {
    /// `mean + Σ (cos_amp cos kx + sin_amp sin kx)`
    Modes { mean: f64, modes: Vec<Mode> },
    /// Node values, one per grid point.
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialSpec {
    pub profile: InitialProfile,
    pub mollify_eps: Option<f64>,
}

impl InitialSpec {
    pub fn modes(mean: f64, modes: Vec<Mode>) -> Self {
        Self {
            profile: InitialProfile::Modes { mean, modes },
            mollify_eps: None,
        }
    }

    pub fn values(values: Vec<f64>) -> Self {
        Self {
            profile: InitialProfile::Values(values),
            mollify_eps: None,
        }
    }

    pub fn with_mollifier(mut self, eps: f64) -> Self {
        self.mollify_eps = Some(eps);
        self
    }

    pub fn build(&self, grid: PeriodicGrid) -> Result<Field> {
        let field = match &self.profile {
            InitialProfile::Modes { mean, modes } => {
                for m in modes {
                    if m.k == 0 {
                        return Err(Error::param("modes.k", "wavenumbers must be >= 1"));
                    }
                }
                Field::from_fn(grid, |x| {
                    mean + modes
                        .iter()
                        .map(|m| {
                            let kx = m.k as f64 * x;
                            m.cos_amp * kx.cos() + m.sin_amp * kx.sin()
                        })
                        .sum::<f64>()
                })?
            }
            InitialProfile::Values(v) => {
                if v.len() != grid.len() {
                    return Err(Error::param(
                        "values",
                        format!("expected {} node values, got {}", grid.len(), v.len()),
                    ));
                }
                Field::new(grid, v.clone())?
            }
        };
        match self.mollify_eps {
            Some(eps) => mollify(&field, eps),
            None => Ok(field),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: ModelKind,
    pub n: usize,
    pub t_end: f64,
    pub cfl: f64,
    /// Time between stored snapshots; steps are shortened to land on them.
    pub snap_every: f64,
    pub dealias: bool,
    /// Compute the O(n²) symmetric dissipation every this many steps
    /// (0 = never).
    pub diag_sym_every: usize,
    pub initial: InitialSpec,
    /// Defaults to [`Scheme::default_for`] the model.
    pub scheme: Option<Scheme>,
    pub dt_max: Option<f64>,
}

impl SimConfig {
    pub fn new(model: ModelKind, n: usize, t_end: f64, initial: InitialSpec) -> Self {
        Self {
            model,
            n,
            t_end,
            cfl: 0.5,
            snap_every: t_end,
            dealias: true,
            diag_sym_every: 0,
            initial,
            scheme: None,
            dt_max: None,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
            .unwrap_or_else(|| Scheme::default_for(&self.model))
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        PeriodicGrid::new(self.n)?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::param(
                "t_end",
                format!("must be > 0, got {}", self.t_end),
            ));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::param(
                "cfl",
                format!("must lie in (0, 1], got {}", self.cfl),
            ));
        }
        if !(self.snap_every > 0.0 && self.snap_every.is_finite()) {
            return Err(Error::param("snap_every", "must be finite and > 0"));
        }
        if let Some(dt) = self.dt_max {
            if !(dt > 0.0) {
                return Err(Error::param("dt_max", "must be > 0"));
            }
        }
        if let Some(eps) = self.initial.mollify_eps {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(Error::param("mollify_eps", "must be finite and >= 0"));
            }
        }
        if self.scheme == Some(Scheme::IfRk4) && self.model.linear_symbol().is_none() {
            return Err(Error::param(
                "scheme",
                format!(
                    "model `{}` has no stiff linear part for ifrk4",
                    self.model.name()
                ),
            ));
        }
        Ok(())
    }

    /// The initial field on the configured grid, checked against the model's
    /// positivity requirement.
    pub fn initial_field(&self) -> Result<Field> {
        let u0 = self.initial.build(PeriodicGrid::new(self.n)?)?;
        if self.model.requires_positive() && u0.min() <= 0.0 {
            return Err(Error::NonPositiveField { min: u0.min() });
        }
        Ok(u0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: Field,
}

/// Why a run stopped before `t_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub t: f64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: SimConfig,
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
    pub abort: Option<Abort>,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.abort.is_none()
    }

    pub fn initial_field(&self) -> &Field {
        &self.snapshots[0].field
    }

    /// Last stored state (`t_end` on success, last good state on abort).
    pub fn final_field(&self) -> &Field {
        &self
            .snapshots
            .last()
            .expect("trajectory has an initial snapshot")
            .field
    }

    pub fn final_time(&self) -> f64 {
        self.snapshots.last().map_or(0.0, |s| s.t)
    }

    pub fn column(&self, f: impl Fn(&DiagnosticsRecord) -> f64) -> Vec<(f64, f64)> {
        self.records.iter().map(|r| (r.t, f(r))).collect()
    }

    /// State at time `t`, linearly interpolated between the bracketing
    /// snapshots; exact at snapshot times.
    pub fn field_at(&self, t: f64) -> Option<Field> {
        let snaps = &self.snapshots;
        let tol = 1e-12 * self.config.t_end.max(1.0);
        if let Some(s) = snaps.iter().find(|s| (s.t - t).abs() <= tol) {
            return Some(s.field.clone());
        }
        let i = snaps.windows(2).position(|w| w[0].t <= t && t <= w[1].t)?;
        let (a, b) = (&snaps[i], &snaps[i + 1]);
        let w = (t - a.t) / (b.t - a.t);
        Some(a.field.scale(1.0 - w).add_scaled(&b.field, w))
    }
}

/// Advances the configured initial-value problem to `t_end`.
///
/// Returns `Err` only for an invalid configuration or initial field. A run
/// that fails mid-way (non-finite values, or the minimum falling below
/// [`POSITIVITY_GUARD`] times its initial value) returns the partial
/// trajectory with [`Trajectory::abort`] set.
pub fn simulate(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let u0 = config.initial_field()?;
    let model = config.model;
    let scheme = config.scheme();
    let symbol = model.linear_symbol();
    let guard = POSITIVITY_GUARD * u0.min();
    let sym_every = config.diag_sym_every;

    let mut traj = Trajectory {
        config: config.clone(),
        records: vec![DiagnosticsRecord::measure(0.0, &u0, sym_every > 0)],
        snapshots: vec![Snapshot {
            t: 0.0,
            field: u0.clone(),
        }],
        steps: 0,
        abort: None,
    };

    let advance = |u: &Field, dt: f64| -> Result<Field> {
        match (scheme, &symbol) {
            (Scheme::IfRk4, Some(sym)) => {
                step_ifrk4(u, dt, sym, |f| model.nonlinear(f, config.dealias))
            }
            _ => step_rk4(u, dt, |f| model.rhs(f, config.dealias)),
        }
    };

    let mut u = u0;
    let mut t = 0.0;
    let mut snap_index = 1usize;
    while t < config.t_end {
        let target = (snap_index as f64 * config.snap_every).min(config.t_end);
        let step = stable_dt_for(&u, &model, config.cfl, scheme)
            .map(|dt| config.dt_max.map_or(dt, |cap| dt.min(cap)))
            .and_then(|dt| {
                // split the way to the next snapshot into equal sub-steps
                let remaining = target - t;
                let count = (remaining / dt).ceil().max(1.0);
                let dt = remaining / count;
                advance(&u, dt).map(|next| (next, dt, count == 1.0))
            })
            .and_then(|(next, dt, lands)| {
                if model.requires_positive() && next.min() <= guard {
                    Err(Error::NonPositiveField { min: next.min() })
                } else {
                    Ok((next, dt, lands))
                }
            });

        let (next, dt, lands) = match step {
            Ok(s) => s,
            Err(error) => {
                let error = match error {
                    Error::BlowUpDetected { reason, .. } => Error::BlowUpDetected { t, reason },
                    other => other,
                };
                if traj.snapshots.last().map(|s| s.t) != Some(t) {
                    traj.snapshots.push(Snapshot { t, field: u });
                }
                traj.abort = Some(Abort { t, error });
                return Ok(traj);
            }
        };

        t = if lands { target } else { t + dt };
        u = next;
        traj.steps += 1;
        let with_sym = sym_every > 0 && traj.steps.is_multiple_of(sym_every);
        traj.records
            .push(DiagnosticsRecord::measure(t, &u, with_sym));
        if lands {
            traj.snapshots.push(Snapshot {
                t,
                field: u.clone(),
            });
            snap_index += 1;
        }
    }
    Ok(traj)
}
