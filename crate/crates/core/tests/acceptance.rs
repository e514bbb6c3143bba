//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::fs;
use std::time::Instant;

use num_rational::Ratio;

use arctan_flow::cli::{run, Command};
use arctan_flow::diagnostics::{dissipation_local, dissipation_symmetric};
use arctan_flow::dynamics::{simulate, InitialSpec, Mode, ModelKind, SimConfig};
use arctan_flow::experiments::{
    decay_experiment, even_defect, l2_budget, link_experiment, link_experiment_with, scaling_check,
    viscosity_sweep, LinkOptions, TimeRescaling,
};
use arctan_flow::spectral::{
    hilbert, lambda_op, lambda_singular_integral_field, Field, PeriodicGrid,
};
use arctan_flow::theory::{eval_f, eval_g, g_closed, threshold, Majorant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cosine(mean: f64, amp: f64) -> InitialSpec {
    InitialSpec::modes(
        mean,
        vec![Mode {
            k: 1,
            cos_amp: amp,
            sin_amp: 0.0,
        }],
    )
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn operator_exactness() -> Outcome {
    let grid = PeriodicGrid::new(256).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for k in 1..=(256 / 3) {
        let kf = k as f64;
        let c = Field::from_fn(grid, |x| (kf * x).cos()).unwrap();
        let s = Field::from_fn(grid, |x| (kf * x).sin()).unwrap();
        worst = worst.max(hilbert(&c).max_abs_diff(&s));
        worst = worst.max(lambda_op(&c).max_abs_diff(&c.scale(kf)));
    }
    let u = Field::from_fn(grid, |x| {
        1.3 + 0.4 * x.cos() - 0.2 * (5.0 * x).sin() + 0.1 * (17.0 * x).cos()
    })
    .unwrap();
    let hh = hilbert(&hilbert(&u));
    let hh_err = hh.max_abs_diff(&u.shift(-u.mean()).scale(-1.0));
    verdict(
        worst < 1e-10 && hh_err < 1e-10,
        format!("max multiplier error {worst:.2e}, H∘H defect {hh_err:.2e}"),
    )
}

fn singular_integral() -> Outcome {
    let grid = PeriodicGrid::new(256).unwrap();
    let u = Field::from_fn(grid, |x| 1.0 + 0.3 * x.cos() + 0.1 * (2.0 * x).sin()).unwrap();
    let spectral = lambda_op(&u);
    let quad = lambda_singular_integral_field(&u);
    let rel =
        spectral.max_abs_diff(&quad) / spectral.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    verdict(rel < 1e-3, format!("relative error {rel:.2e}"))
}

fn canonical_run(snap_every: f64) -> Result<arctan_flow::dynamics::Trajectory, String> {
    let mut cfg = SimConfig::new(ModelKind::Arctan, 256, 1.0, cosine(1.0, 0.5));
    cfg.snap_every = snap_every;
    let traj = simulate(&cfg).map_err(|e| e.to_string())?;
    match &traj.abort {
        Some(a) => Err(format!("run aborted at t = {}: {}", a.t, a.error)),
        None => Ok(traj),
    }
}

fn principles() -> Outcome {
    let traj = canonical_run(0.1)?;
    let m0 = traj.records[0].mass;
    let dmass = traj
        .records
        .iter()
        .map(|r| (r.mass - m0).abs())
        .fold(0.0, f64::max);
    let max_rise = traj
        .records
        .windows(2)
        .map(|w| w[1].max - w[0].max)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_drop = traj
        .records
        .windows(2)
        .map(|w| w[0].min - w[1].min)
        .fold(f64::NEG_INFINITY, f64::max);
    let parity = traj
        .snapshots
        .iter()
        .map(|s| even_defect(&s.field))
        .fold(0.0, f64::max);
    verdict(
        dmass < 1e-10 && max_rise <= 1e-8 && min_drop <= 1e-8 && parity <= 1e-8,
        format!(
            "|Δmass| {dmass:.1e}, max rise {max_rise:.1e}, min drop {min_drop:.1e}, parity {parity:.1e}, {} steps",
            traj.steps
        ),
    )
}

fn l2_identity() -> Outcome {
    let traj = canonical_run(0.25)?;
    let budget = l2_budget(&traj).map_err(|e| e.to_string())?;
    println!(
        "    L² budget: drop {:.6e}, ∫𝒟 {:.6e}, rel. error factor 1: {:.2e}, factor 2: {:.2e}; matching factor {}",
        budget.drop, budget.integral, budget.rel_err_factor_1, budget.rel_err_factor_2,
        budget.matching_factor
    );
    let identity_err = match budget.matching_factor {
        2 => budget.rel_err_factor_2,
        _ => budget.rel_err_factor_1,
    };
    let mut forms: f64 = 0.0;
    for s in &traj.snapshots {
        let local = dissipation_local(&s.field).map_err(|e| e.to_string())?;
        let sym = dissipation_symmetric(&s.field).map_err(|e| e.to_string())?;
        forms = forms.max(((local - sym) / local).abs());
    }
    verdict(
        identity_err < 1e-3 && forms < 1e-3 && traj.snapshots.len() == 5,
        format!(
            "identity rel. error {identity_err:.2e} (factor {}), local vs symmetric {forms:.2e} at {} times",
            budget.matching_factor,
            traj.snapshots.len()
        ),
    )
}

fn constants() -> Outcome {
    let f017 = eval_f(0.17).map_err(|e| e.to_string())?;
    let g024 = eval_g(0.24).map_err(|e| e.to_string())?;
    let (c_lo, c_hi) = threshold(Majorant::F, 1e-6).map_err(|e| e.to_string())?;
    let (t_lo, t_hi) = threshold(Majorant::G, 1e-6).map_err(|e| e.to_string())?;
    let exact = g_closed(Ratio::new(1i64, 4)) == Ratio::from_integer(1);
    let tilde_ok = (t_lo - 0.25).abs() <= 1e-6 && (t_hi - 0.25).abs() <= 1e-6;
    verdict(
        f017 < 1.0 && g024 < 1.0 && c_lo > 0.17 && c_hi < 0.18 && tilde_ok && exact,
        format!(
            "F(0.17) = {f017:.5}, G(0.24) = {g024:.5}, 𝒞 ∈ [{c_lo:.7}, {c_hi:.7}], 𝒞̃ ∈ [{t_lo:.7}, {t_hi:.7}], G(1/4) = 1 exactly: {exact}"
        ),
    )
}

fn decay() -> Outcome {
    let grid = PeriodicGrid::new(128).unwrap();
    let profile = Field::from_fn(grid, f64::cos).unwrap();
    let (rep, _) = decay_experiment(1.0, &profile, 0.15, 10.0).map_err(|e| e.to_string())?;
    verdict(
        rep.monotone_a1 && rep.delta_a1 > 0.0,
        format!(
            "r = {:.3}, monotone {}, δ = {:.4} (A⁰ {:.4}, L^∞ {:.4}, L^∞ monotone {})",
            rep.r0, rep.monotone_a1, rep.delta_a1, rep.delta_a0, rep.delta_linf, rep.monotone_linf
        ),
    )
}

fn vanishing_viscosity() -> Outcome {
    let mut base = SimConfig::new(ModelKind::Arctan, 256, 0.5, cosine(1.0, 0.3));
    base.snap_every = 0.5;
    let nus: Vec<f64> = (0..4).map(|i| 0.1 * 0.5f64.powi(i)).collect();
    let rep = viscosity_sweep(&base, &nus).map_err(|e| e.to_string())?;
    let strict = rep.check("strictly_decreasing").is_some_and(|c| c.passed);
    let min_ok = rep.check("min_bound").is_some_and(|c| c.passed);
    verdict(
        strict && min_ok && !rep.partial,
        format!(
            "differences {:?}, order {:?}, {}",
            rep.errors
                .iter()
                .map(|e| format!("{e:.3e}"))
                .collect::<Vec<_>>(),
            rep.order.map(|p| format!("{p:.2}")),
            rep.check("min_bound")
                .map(|c| c.detail.clone())
                .unwrap_or_default()
        ),
    )
}

fn link() -> Outcome {
    let grid = PeriodicGrid::new(64).unwrap();
    let profile = Field::from_fn(grid, f64::cos).unwrap();
    let amps = [0.08, 0.04, 0.02];
    let rep = link_experiment(1.0, &profile, &amps, 1.0).map_err(|e| e.to_string())?;
    let fault = LinkOptions {
        rescaling: TimeRescaling::Identity,
        ..LinkOptions::default()
    };
    let control =
        link_experiment_with(2.0, &profile, &amps, 1.0, &fault).map_err(|e| e.to_string())?;
    let p = rep.order.unwrap_or(f64::NAN);
    let q = control.order.unwrap_or(f64::NAN);
    verdict(
        (2.7..=3.3).contains(&p) && q < 1.5,
        format!(
            "order {p:.3} (errors {:?}); faulty rescaling at mean 2: order {q:.3}",
            rep.errors
                .iter()
                .map(|e| format!("{e:.3e}"))
                .collect::<Vec<_>>()
        ),
    )
}

fn scaling() -> Outcome {
    let base = SimConfig::new(ModelKind::Arctan, 256, 1.0, cosine(1.0, 0.5));
    let err = scaling_check(&base, 2, 0.0, 0.5).map_err(|e| e.to_string())?;
    verdict(err < 1e-6, format!("max error {err:.2e}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"model":"arctan","n":128,"t_end":0.5,"snap_every":0.1,"diag_sym_every":10,
            "initial":{"mean":1.0,"modes":[{"k":1,"cos_amp":0.4,"sin_amp":0.1},{"k":3,"cos_amp":0.05,"sin_amp":0.0}]}}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut bodies = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}"));
        let outcome = run(&Command::Simulate {
            config: config.clone(),
            out: out.clone(),
        });
        if let Some(e) = outcome.error {
            return Err(e.to_string());
        }
        bodies.push(fs::read(out.join("diagnostics.csv")).map_err(|e| e.to_string())?);
    }
    verdict(
        bodies[0] == bodies[1] && !bodies[0].is_empty(),
        format!(
            "{} bytes, identical: {}",
            bodies[0].len(),
            bodies[0] == bodies[1]
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("operator exactness", operator_exactness),
        ("singular-integral cross-check", singular_integral),
        ("conservation and extremum principles", principles),
        ("L² identity and dissipation forms", l2_identity),
        ("small-data constants", constants),
        ("A¹ decay", decay),
        ("vanishing viscosity", vanishing_viscosity),
        ("CCCF link order", link),
        ("scaling invariance", scaling),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {name}: {detail} ({secs:.2} s)", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
