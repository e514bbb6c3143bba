//! Multi-run studies: vanishing viscosity, the small-amplitude link to the
//! CCCF model, small-data decay, scaling and resolution checks.
//!
//! Levels of a sweep are independent runs and execute in parallel.

use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{wiener_norm, DiagnosticsRecord};
use crate::dynamics::{simulate, InitialSpec, ModelKind, SimConfig, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::Field;
use crate::theory::fit_decay_rate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub experiment: String,
    /// `"nu"` or `"amp"`.
    pub parameter: String,
    pub parameters: Vec<f64>,
    pub errors: Vec<f64>,
    /// Whether `errors[i]` compares level `i` with level `i + 1` rather than
    /// measuring level `i` alone.
    pub pairwise: bool,
    pub order: Option<f64>,
    pub checks: Vec<Check>,
    /// Some level stopped before `t_end`.
    pub partial: bool,
    pub pass: bool,
}

impl SweepReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    /// Error table: `parameter,next_parameter,error` (the middle column is
    /// empty for non-pairwise sweeps).
    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["parameter", "next_parameter", "error"])?;
        for (i, e) in self.errors.iter().enumerate() {
            let next = if self.pairwise {
                self.parameters[i + 1].to_string()
            } else {
                String::new()
            };
            w.write_record([self.parameters[i].to_string(), next, e.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn strictly_decreasing_positive(name: &str, list: &[f64]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::param(name, "list is empty"));
    }
    if list.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::param(name, "entries must be finite and > 0"));
    }
    if list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::param(name, "entries must be strictly decreasing"));
    }
    Ok(())
}

/// `‖a - b‖_{L²}` by the trapezoid rule.
pub fn l2_distance(a: &Field, b: &Field) -> f64 {
    let dx = a.grid().dx();
    (a.sub(b).values().iter().map(|v| v * v).sum::<f64>() * dx).sqrt()
}

/// Mean of `log(e_i / e_{i+1}) / log(ratio)` over consecutive errors.
pub fn order_of_convergence(errors: &[f64], ratio: f64) -> Result<f64> {
    if errors.len() < 2 {
        return Err(Error::param("errors", "need at least two errors"));
    }
    if errors.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::param("errors", "errors must be finite and > 0"));
    }
    if !(ratio > 0.0) || ratio == 1.0 || !ratio.is_finite() {
        return Err(Error::param(
            "ratio",
            format!("must be > 0 and != 1, got {ratio}"),
        ));
    }
    let orders: Vec<f64> = errors
        .windows(2)
        .map(|w| (w[0] / w[1]).ln() / ratio.ln())
        .collect();
    Ok(orders.iter().sum::<f64>() / orders.len() as f64)
}

/// Least-squares exponent `p` in `error ≈ C · param^p`.
pub fn fit_power_law(params: &[f64], errors: &[f64]) -> Result<f64> {
    if params.len() != errors.len() || params.len() < 2 {
        return Err(Error::param("errors", "need matching lists of length >= 2"));
    }
    if params
        .iter()
        .chain(errors)
        .any(|&v| !(v > 0.0) || !v.is_finite())
    {
        return Err(Error::param("errors", "values must be finite and > 0"));
    }
    let m = params.len() as f64;
    let xs: Vec<f64> = params.iter().map(|p| p.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (xm, ym) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    Ok(sxy / sxx)
}

/// Slack on the lower bound `min u^ν(t) >= min u₀` in the viscosity sweep.
pub const VISCOSITY_MIN_TOL: f64 = 1e-6;

/// Solves the viscous problem with `ν` from `nu_list` and initial data
/// mollified with `eps = ν`, then compares final states of consecutive
/// levels in `L²`.
///
/// Passes when the differences are nonincreasing (Cauchy) and every level
/// keeps `min u >= min u₀ - 1e-6`, with `u₀` the unmollified data.
pub fn viscosity_sweep(base: &SimConfig, nu_list: &[f64]) -> Result<SweepReport> {
    strictly_decreasing_positive("nu_list", nu_list)?;
    let mut raw = base.initial.clone();
    raw.mollify_eps = None;
    let u0_min = raw
        .build(crate::spectral::PeriodicGrid::new(base.n)?)?
        .min();

    let configs: Vec<SimConfig> = nu_list
        .iter()
        .map(|&nu| {
            let mut cfg = base.clone();
            cfg.model = ModelKind::ViscousArctan { nu };
            cfg.initial.mollify_eps = Some(nu);
            cfg
        })
        .collect();
    let runs: Vec<Trajectory> = configs
        .par_iter()
        .map(simulate)
        .collect::<Result<Vec<_>>>()?;

    let partial = runs.iter().any(|r| !r.is_complete());
    let errors: Vec<f64> = runs
        .windows(2)
        .map(|w| l2_distance(w[0].final_field(), w[1].final_field()))
        .collect();
    let run_min = runs
        .iter()
        .flat_map(|r| r.records.iter().map(|rec| rec.min))
        .fold(f64::INFINITY, f64::min);

    let nonincreasing = errors.windows(2).all(|w| w[1] <= w[0]);
    let strict = errors.windows(2).all(|w| w[1] < w[0]);
    let min_ok = run_min >= u0_min - VISCOSITY_MIN_TOL;
    let order = if nu_list.len() >= 3 {
        order_of_convergence(&errors, nu_list[0] / nu_list[1]).ok()
    } else {
        None
    };
    let checks = vec![
        Check::new("cauchy_nonincreasing", nonincreasing, format!("{errors:?}")),
        Check::new("strictly_decreasing", strict, format!("{errors:?}")),
        Check::new(
            "min_bound",
            min_ok,
            format!("min over all levels {run_min} vs min u0 {u0_min}"),
        ),
        Check::new("complete", !partial, String::new()),
    ];
    Ok(SweepReport {
        experiment: "viscosity-sweep".into(),
        parameter: "nu".into(),
        parameters: nu_list.to_vec(),
        errors,
        pairwise: true,
        order,
        checks,
        partial,
        pass: nonincreasing && min_ok && !partial,
    })
}

/// Time argument used when reading the CCCF solution back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeRescaling {
    /// `g` at `t / ⟨u₀⟩` (the correct reconstruction).
    Mean,
    /// `g` at `t`; wrong unless `⟨u₀⟩ = 1`. Kept as a negative control.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkOptions {
    pub cfl: f64,
    pub rescaling: TimeRescaling,
    /// Equispaced sample times in `[0, t_end]`, endpoints included.
    pub samples: usize,
    /// Step cap for both runs; derived from the smallest amplitude when unset.
    pub dt_max: Option<f64>,
    pub expected_order: (f64, f64),
}

impl Default for LinkOptions {
    fn default() -> Self {
        Self {
            cfl: 0.5,
            rescaling: TimeRescaling::Mean,
            samples: 11,
            dt_max: None,
            expected_order: (2.7, 3.3),
        }
    }
}

/// Step cap keeping `dt² < 0.01 amp³`, so time-interpolation error stays
/// well below the `O(amp³)` effect being measured.
pub fn link_dt_cap(amp_min: f64) -> f64 {
    0.99 * (0.01 * amp_min.powi(3)).sqrt()
}

fn check_profile(mean: f64, profile: &Field) -> Result<()> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::param("mean", format!("must be > 0, got {mean}")));
    }
    let scale = profile.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if profile.mean().abs() > 1e-10 * scale {
        return Err(Error::param(
            "profile",
            format!("must have zero mean, got {:e}", profile.mean()),
        ));
    }
    Ok(())
}

/// `sup_t ‖u(t) - (⟨u₀⟩ + ⟨u₀⟩ g(t/⟨u₀⟩))‖_{L²}` over the sample times,
/// where `u` solves the transport equation from `mean + amp·profile` and `g`
/// the CCCF model from `amp·profile/mean`.
pub fn link_error(
    mean: f64,
    profile: &Field,
    amp: f64,
    t_end: f64,
    opts: &LinkOptions,
) -> Result<f64> {
    check_profile(mean, profile)?;
    if !(amp >= 0.0) {
        return Err(Error::param("amp", "must be >= 0"));
    }
    if opts.samples < 2 {
        return Err(Error::param("samples", "need at least 2 sample times"));
    }
    let u0 = profile.scale(amp).shift(mean);
    if u0.min() <= 0.0 {
        return Err(Error::param(
            "amp_list",
            format!("mean + {amp}·profile is not positive; shrink the amplitude"),
        ));
    }
    let cap = opts
        .dt_max
        .or_else(|| (amp > 0.0).then(|| link_dt_cap(amp)));
    let intervals = (opts.samples - 1) as f64;
    let n = profile.len();

    let mut u_cfg = SimConfig::new(
        ModelKind::Arctan,
        n,
        t_end,
        InitialSpec::values(u0.into_values()),
    );
    u_cfg.cfl = opts.cfl;
    u_cfg.snap_every = t_end / intervals;
    u_cfg.dt_max = cap;

    let g_end = match opts.rescaling {
        TimeRescaling::Mean => t_end / mean,
        TimeRescaling::Identity => t_end,
    };
    let mut g_cfg = SimConfig::new(
        ModelKind::Cccf,
        n,
        g_end,
        InitialSpec::values(profile.scale(amp / mean).into_values()),
    );
    g_cfg.cfl = opts.cfl;
    g_cfg.snap_every = g_end / intervals;
    g_cfg.dt_max = cap;

    let (u_run, g_run) = rayon::join(|| simulate(&u_cfg), || simulate(&g_cfg));
    let (u_run, g_run) = (u_run?, g_run?);
    for run in [&u_run, &g_run] {
        if let Some(abort) = &run.abort {
            return Err(Error::param(
                "amp_list",
                format!(
                    "{} run at amp {amp} stopped at t = {}: {}; shrink the amplitude",
                    run.config.model.name(),
                    abort.t,
                    abort.error
                ),
            ));
        }
    }

    let mut worst = 0.0f64;
    for i in 0..opts.samples {
        let t = t_end * i as f64 / intervals;
        let g_t = match opts.rescaling {
            TimeRescaling::Mean => t / mean,
            TimeRescaling::Identity => t,
        };
        let u = u_run.field_at(t).expect("sample time inside run");
        let g = g_run.field_at(g_t).expect("sample time inside run");
        let approx = g.scale(mean).shift(mean);
        worst = worst.max(l2_distance(&u, &approx));
    }
    Ok(worst)
}

pub fn link_experiment(
    mean: f64,
    profile: &Field,
    amp_list: &[f64],
    t_end: f64,
) -> Result<SweepReport> {
    link_experiment_with(mean, profile, amp_list, t_end, &LinkOptions::default())
}

/// Runs [`link_error`] for every amplitude and fits `error ∝ amp^p`.
pub fn link_experiment_with(
    mean: f64,
    profile: &Field,
    amp_list: &[f64],
    t_end: f64,
    opts: &LinkOptions,
) -> Result<SweepReport> {
    strictly_decreasing_positive("amp_list", amp_list)?;
    check_profile(mean, profile)?;
    if !(t_end > 0.0) {
        return Err(Error::param("t_end", "must be > 0"));
    }
    let largest = amp_list[0];
    if mean + largest * profile.min() <= 0.0 {
        return Err(Error::param(
            "amp_list",
            format!("mean + {largest}·profile is not positive; shrink the largest amplitude"),
        ));
    }
    let mut opts = opts.clone();
    let amp_min = *amp_list.last().expect("non-empty");
    opts.dt_max = opts.dt_max.or(Some(link_dt_cap(amp_min)));

    let errors: Vec<f64> = amp_list
        .par_iter()
        .map(|&a| link_error(mean, profile, a, t_end, &opts))
        .collect::<Result<Vec<_>>>()?;
    let order = if amp_list.len() >= 2 {
        fit_power_law(amp_list, &errors).ok()
    } else {
        None
    };
    let (lo, hi) = opts.expected_order;
    let in_window = order.is_some_and(|p| (lo..=hi).contains(&p));
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let checks = vec![Check::new(
        "order_window",
        in_window,
        format!("order {order:?}, expected [{lo}, {hi}], consecutive ratios {ratios:?}"),
    )];
    Ok(SweepReport {
        experiment: match opts.rescaling {
            TimeRescaling::Mean => "link-experiment".into(),
            TimeRescaling::Identity => "link-experiment (identity time rescaling)".into(),
        },
        parameter: "amp".into(),
        parameters: amp_list.to_vec(),
        errors,
        pairwise: false,
        order,
        checks,
        partial: false,
        pass: in_window,
    })
}

/// Largest `‖amp·profile‖_{A¹}/mean` accepted by [`decay_experiment`].
pub const DECAY_REGIME_MAX: f64 = 0.17;
/// Slack for the monotone-decrease checks.
pub const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub mean: f64,
    pub amp: f64,
    /// `‖amp·profile‖_{A¹} / mean`.
    pub r0: f64,
    /// `‖amp·profile‖_{A⁰} / mean`.
    pub s0: f64,
    pub delta_a1: f64,
    pub monotone_a1: bool,
    pub delta_a0: f64,
    pub delta_linf: f64,
    pub monotone_linf: bool,
    /// `sup_t ‖u(t) - ⟨u₀⟩‖_{L^∞} <= ‖u₀ - ⟨u₀⟩‖_{A⁰}` on every record.
    pub linf_below_a0: bool,
    pub samples: usize,
    pub pass: bool,
}

fn monotone(series: &[(f64, f64)]) -> bool {
    series.windows(2).all(|w| w[1].1 <= w[0].1 + MONOTONE_SLACK)
}

fn rate(series: &[(f64, f64)]) -> Result<f64> {
    if series.iter().all(|&(_, v)| v == 0.0) {
        Ok(0.0)
    } else {
        fit_decay_rate(series)
    }
}

/// Tracks `‖u(t) - ⟨u₀⟩‖_{A¹}` (and the `A⁰`, `L^∞` analogues) for data
/// `mean + amp·profile` inside the certified small-data regime.
pub fn decay_experiment(
    mean: f64,
    profile: &Field,
    amp: f64,
    t_end: f64,
) -> Result<(DecayReport, Trajectory)> {
    check_profile(mean, profile)?;
    if !(amp >= 0.0) {
        return Err(Error::param("amp", "must be >= 0"));
    }
    let perturbation = profile.scale(amp);
    let r0 = wiener_norm(&perturbation, 1.0)? / mean;
    let s0 = wiener_norm(&perturbation, 0.0)? / mean;
    if r0 > DECAY_REGIME_MAX {
        return Err(Error::param(
            "amp",
            format!("r = ‖v₀‖_A¹/mean = {r0} exceeds {DECAY_REGIME_MAX}"),
        ));
    }
    let mut cfg = SimConfig::new(
        ModelKind::Arctan,
        profile.len(),
        t_end,
        InitialSpec::values(perturbation.shift(mean).into_values()),
    );
    cfg.snap_every = t_end / 10.0;
    let traj = simulate(&cfg)?;
    if let Some(abort) = &traj.abort {
        return Err(abort.error.clone());
    }

    let a1 = traj.column(|r| r.a1);
    let a0 = traj.column(|r| r.a0);
    let linf = traj.column(|r: &DiagnosticsRecord| (r.max - r.mean()).max(r.mean() - r.min));
    let a0_initial = a0[0].1;
    let delta_a1 = rate(&a1)?;
    let monotone_a1 = monotone(&a1);
    let report = DecayReport {
        mean,
        amp,
        r0,
        s0,
        delta_a1,
        monotone_a1,
        delta_a0: rate(&a0)?,
        delta_linf: rate(&linf)?,
        monotone_linf: monotone(&linf),
        linf_below_a0: linf.iter().all(|&(_, v)| v <= a0_initial + MONOTONE_SLACK),
        samples: a1.len(),
        pass: monotone_a1 && (delta_a1 > 0.0 || amp == 0.0),
    };
    Ok((report, traj))
}

/// Max deviation between the run started from `λ^α u₀(λx)` at time `t` and
/// `λ^α u(λx, λ^{1-α} t)` read off the run started from `u₀`, both on the
/// same grid (node `j` of the first matches node `λj mod n` of the second).
pub fn scaling_check(base: &SimConfig, lambda: u32, alpha: f64, t: f64) -> Result<f64> {
    if lambda < 1 {
        return Err(Error::param("lambda", "must be >= 1"));
    }
    let u0 = base.initial_field()?;
    let n = base.n;
    let l = lambda as f64;
    let amplitude = l.powf(alpha);
    let scaled: Vec<f64> = (0..n)
        .map(|j| amplitude * u0.values()[(lambda as usize * j) % n])
        .collect();

    let mut original = base.clone();
    original.initial = InitialSpec::values(u0.into_values());
    original.t_end = l.powf(1.0 - alpha) * t;
    original.snap_every = original.t_end;
    let mut rescaled = base.clone();
    rescaled.initial = InitialSpec::values(scaled);
    rescaled.t_end = t;
    rescaled.snap_every = t;

    let (a, b) = rayon::join(|| simulate(&original), || simulate(&rescaled));
    let (a, b) = (a?, b?);
    for run in [&a, &b] {
        if let Some(abort) = &run.abort {
            return Err(abort.error.clone());
        }
    }
    let (ua, ub) = (a.final_field(), b.final_field());
    Ok((0..n)
        .map(|j| (ub.values()[j] - amplitude * ua.values()[(lambda as usize * j) % n]).abs())
        .fold(0.0, f64::max))
}

/// Max change of the final state at the shared nodes when the grid is
/// refined from `n` to `2n`.
pub fn resolution_check(base: &SimConfig) -> Result<f64> {
    let mut fine = base.clone();
    fine.n = 2 * base.n;
    let (a, b) = rayon::join(|| simulate(base), || simulate(&fine));
    let (a, b) = (a?, b?);
    for run in [&a, &b] {
        if let Some(abort) = &run.abort {
            return Err(abort.error.clone());
        }
    }
    let (coarse, fine) = (a.final_field(), b.final_field());
    Ok((0..base.n)
        .map(|j| (coarse.values()[j] - fine.values()[2 * j]).abs())
        .fold(0.0, f64::max))
}

/// Max of `|u(x_j) - u(2π - x_j)|`.
pub fn even_defect(field: &Field) -> f64 {
    let g = field.grid();
    (0..field.len())
        .map(|j| (field.values()[j] - field.values()[g.mirror(j)]).abs())
        .fold(0.0, f64::max)
}

/// Budget of the `L²` identity along a trajectory: the drop
/// `‖u₀‖² - ‖u(t)‖²` against the trapezoid integral of `𝒟`, for both
/// candidate prefactors 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L2Budget {
    pub drop: f64,
    pub integral: f64,
    pub rel_err_factor_1: f64,
    pub rel_err_factor_2: f64,
    pub matching_factor: u32,
}

pub fn l2_budget(traj: &Trajectory) -> Result<L2Budget> {
    let recs = &traj.records;
    let d = |r: &DiagnosticsRecord| {
        r.d_local
            .ok_or_else(|| Error::param("trajectory", "dissipation missing (non-positive field)"))
    };
    let mut integral = 0.0;
    for w in recs.windows(2) {
        integral += 0.5 * (w[1].t - w[0].t) * (d(&w[0])? + d(&w[1])?);
    }
    let first = recs
        .first()
        .ok_or_else(|| Error::param("trajectory", "no records"))?;
    let last = recs.last().expect("non-empty");
    let drop = first.l2sq - last.l2sq;
    let rel = |factor: f64| ((drop - factor * integral) / drop).abs();
    let (e1, e2) = (rel(1.0), rel(2.0));
    Ok(L2Budget {
        drop,
        integral,
        rel_err_factor_1: e1,
        rel_err_factor_2: e2,
        matching_factor: if e2 <= e1 { 2 } else { 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Mode;
    use crate::spectral::PeriodicGrid;

    fn cos_profile(n: usize) -> Field {
        Field::from_fn(PeriodicGrid::new(n).unwrap(), f64::cos).unwrap()
    }

    #[test]
    fn order_examples() {
        assert!((order_of_convergence(&[1.0, 1.0 / 8.0], 2.0).unwrap() - 3.0).abs() < 1e-12);
        assert!(
            (order_of_convergence(&[1.0, 1.0 / 16.0, 1.0 / 256.0], 2.0).unwrap() - 4.0).abs()
                < 1e-12
        );
        assert!(order_of_convergence(&[0.3, 0.3, 0.3], 2.0).unwrap().abs() < 1e-15);
        assert!(order_of_convergence(&[1.0, 0.0], 2.0).is_err());
        assert!(order_of_convergence(&[1.0], 2.0).is_err());
    }

    #[test]
    fn power_law_fit() {
        let a = [0.08, 0.04, 0.02];
        let e: Vec<f64> = a.iter().map(|x: &f64| 5.0 * x.powi(3)).collect();
        assert!((fit_power_law(&a, &e).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_level_sweep_passes_trivially() {
        let cfg = SimConfig::new(
            ModelKind::Arctan,
            32,
            0.1,
            InitialSpec::modes(
                1.0,
                vec![Mode {
                    k: 1,
                    cos_amp: 0.3,
                    sin_amp: 0.0,
                }],
            ),
        );
        let rep = viscosity_sweep(&cfg, &[0.1]).unwrap();
        assert!(rep.pass && rep.errors.is_empty());
    }

    #[test]
    fn constant_data_sweep_has_zero_differences() {
        let cfg = SimConfig::new(ModelKind::Arctan, 32, 0.2, InitialSpec::modes(1.0, vec![]));
        let rep = viscosity_sweep(&cfg, &[0.1, 0.05, 0.025]).unwrap();
        assert!(rep.errors.iter().all(|&e| e == 0.0), "{:?}", rep.errors);
        assert!(rep.pass);
        assert!(viscosity_sweep(&cfg, &[0.05, 0.1]).is_err());
    }

    #[test]
    fn zero_amplitude_link_error_vanishes() {
        let e = link_error(1.0, &cos_profile(32), 0.0, 0.5, &LinkOptions::default()).unwrap();
        assert!(e < 1e-14, "{e}");
    }

    #[test]
    fn link_rejects_bad_inputs() {
        let p = cos_profile(32);
        assert!(link_experiment(1.0, &p, &[1.5, 0.5], 1.0).is_err());
        assert!(link_experiment(1.0, &p.shift(0.1), &[0.1], 1.0).is_err());
        assert!(link_experiment(1.0, &p, &[0.02, 0.04], 1.0).is_err());
    }

    #[test]
    fn zero_amplitude_decay() {
        let (rep, _) = decay_experiment(1.0, &cos_profile(32), 0.0, 1.0).unwrap();
        assert_eq!(rep.delta_a1, 0.0);
        assert!(rep.monotone_a1 && rep.pass);
    }

    #[test]
    fn decay_regime_enforced() {
        assert!(matches!(
            decay_experiment(1.0, &cos_profile(32), 0.2, 1.0),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn csv_table_layout() {
        let rep = SweepReport {
            experiment: "x".into(),
            parameter: "nu".into(),
            parameters: vec![0.1, 0.05],
            errors: vec![0.01],
            pairwise: true,
            order: None,
            checks: vec![],
            partial: false,
            pass: true,
        };
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "parameter,next_parameter,error\n0.1,0.05,0.01\n"
        );
    }
}
