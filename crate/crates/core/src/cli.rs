//! Command-line front end. [`run`] does all the work so it can be driven
//! from tests; `main` only parses arguments and sets the exit status.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::config::{parse_config, parse_config_shape, ConfigError};
use crate::diagnostics::write_csv;
use crate::dynamics::{simulate, SimConfig, Trajectory};
use crate::error::Error;
use crate::experiments::{decay_experiment, link_experiment, viscosity_sweep, SweepReport};
use crate::spectral::PeriodicGrid;
use crate::theory::{eval_f, eval_g, g_closed, threshold, Majorant};

const EXIT_CODES: &str = "\
Exit codes:
  0   success
  2   invalid command-line usage
  3   config is not well-formed JSON
  4   config failed validation
  5   I/O failure
  6   invalid parameter
  7   field not strictly positive
  8   blow-up detected during a run
  9   invalid field or undefined operator
  10  run completed but its checks failed (see report.json)";

#[derive(Debug, Parser)]
#[command(
    name = "arctan-flow",
    version,
    about = "Pseudo-spectral solver and verification studies for the arctan transport equation"
)]
#[command(after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run one simulation; writes diagnostics.csv and snapshots.jsonl.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Vanishing-viscosity study with mollified data (eps = nu); writes report.json and report.csv.
    ViscositySweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025,0.0125")]
        nu_list: Vec<f64>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Small-amplitude comparison with the CCCF model. The config's initial
    /// block gives the mean and the perturbation profile.
    LinkExperiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02")]
        amp_list: Vec<f64>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Decay of the A¹ norm of the perturbation in the small-data regime.
    DecayExperiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Multiplier on the config's perturbation profile.
        #[arg(long, default_value_t = 1.0)]
        amp: f64,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Bisect the small-data thresholds; writes constants.json.
    CertifyConstants {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

impl Command {
    pub fn out_dir(&self) -> &Path {
        match self {
            Command::Simulate { out, .. }
            | Command::ViscositySweep { out, .. }
            | Command::LinkExperiment { out, .. }
            | Command::DecayExperiment { out, .. }
            | Command::CertifyConstants { out, .. } => out,
        }
    }

    pub fn config_path(&self) -> Option<&Path> {
        match self {
            Command::Simulate { config, .. }
            | Command::ViscositySweep { config, .. }
            | Command::LinkExperiment { config, .. }
            | Command::DecayExperiment { config, .. } => Some(config),
            Command::CertifyConstants { .. } => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("checks failed: {0}")]
    ChecksFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(ConfigError::Parse { .. }) => 3,
            CliError::Config(ConfigError::Validation { .. }) => 4,
            CliError::Io { .. } => 5,
            CliError::Core(e) => match e {
                Error::InvalidParameter { .. } => 6,
                Error::NonPositiveField { .. } => 7,
                Error::BlowUpDetected { .. } => 8,
                Error::InvalidField(_) | Error::UndefinedInverse { .. } => 9,
            },
            CliError::ChecksFailed(_) => 10,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(ConfigError::Parse { .. }) => "ParseError",
            CliError::Config(ConfigError::Validation { .. }) => "ValidationError",
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.kind(),
            CliError::ChecksFailed(_) => "ChecksFailed",
        }
    }

    /// Body of `error.json`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        match self {
            CliError::Config(ConfigError::Parse { line, column, .. }) => {
                v["line"] = json!(line);
                v["column"] = json!(column);
            }
            CliError::Config(ConfigError::Validation { field, .. }) => v["field"] = json!(field),
            CliError::Core(Error::InvalidParameter { name, .. }) => v["field"] = json!(name),
            _ => {}
        }
        v
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// File names relative to `out_dir`.
    pub files: Vec<String>,
    pub exit_status: i32,
    pub wall_seconds: f64,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub error: Option<CliError>,
}

/// Collects output files under one directory.
struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut dyn Write) -> Result<(), String>,
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
        let mut w = BufWriter::new(file);
        body(&mut w).map_err(|e| io_err(&path, e))?;
        w.flush().map_err(|e| io_err(&path, e))?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(|e| e.to_string())?;
            writeln!(w).map_err(|e| e.to_string())
        })
    }
}

#[derive(Serialize)]
struct SnapshotLine<'a> {
    t: f64,
    n: usize,
    values: &'a [f64],
}

fn write_trajectory(out: &mut Outputs, traj: &Trajectory) -> Result<(), CliError> {
    out.write("diagnostics.csv", |w| {
        write_csv(w, &traj.records).map_err(|e| e.to_string())
    })?;
    out.write("snapshots.jsonl", |w| {
        for s in &traj.snapshots {
            let line = SnapshotLine {
                t: s.t,
                n: s.field.len(),
                values: s.field.values(),
            };
            serde_json::to_writer(&mut *w, &line).map_err(|e| e.to_string())?;
            writeln!(w).map_err(|e| e.to_string())?;
        }
        Ok(())
    })
}

fn write_report(out: &mut Outputs, report: &SweepReport) -> Result<(), CliError> {
    out.json("report.json", report)?;
    out.write("report.csv", |w| {
        report.write_csv(w).map_err(|e| e.to_string())
    })
}

fn read_config(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// Mean and mean-zero profile described by a config's initial block.
fn mean_and_profile(cfg: &SimConfig) -> Result<(f64, crate::spectral::Field), CliError> {
    let u0 = cfg.initial.build(PeriodicGrid::new(cfg.n)?)?;
    let mean = u0.mean();
    Ok((mean, u0.shift(-mean)))
}

fn ensure(pass: bool, what: &str) -> Result<(), CliError> {
    if pass {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(format!("{what}; see report.json")))
    }
}

fn execute(cmd: &Command, out: &mut Outputs) -> Result<(), CliError> {
    match cmd {
        Command::Simulate { config, .. } => {
            let cfg = parse_config(&read_config(config)?)?;
            let traj = simulate(&cfg)?;
            write_trajectory(out, &traj)?;
            match traj.abort {
                Some(abort) => Err(abort.error.into()),
                None => Ok(()),
            }
        }
        Command::ViscositySweep {
            config,
            nu_list,
            t_end,
            ..
        } => {
            let mut cfg = parse_config(&read_config(config)?)?;
            if let Some(t) = t_end {
                cfg.t_end = *t;
                cfg.snap_every = *t;
            }
            let report = viscosity_sweep(&cfg, nu_list)?;
            write_report(out, &report)?;
            ensure(report.pass, "viscosity sweep")
        }
        Command::LinkExperiment {
            config,
            amp_list,
            t_end,
            ..
        } => {
            let cfg = parse_config_shape(&read_config(config)?)?;
            let (mean, profile) = mean_and_profile(&cfg)?;
            let report = link_experiment(mean, &profile, amp_list, t_end.unwrap_or(cfg.t_end))?;
            write_report(out, &report)?;
            ensure(report.pass, "link experiment")
        }
        Command::DecayExperiment {
            config, amp, t_end, ..
        } => {
            let cfg = parse_config_shape(&read_config(config)?)?;
            let (mean, profile) = mean_and_profile(&cfg)?;
            let (report, traj) =
                decay_experiment(mean, &profile, *amp, t_end.unwrap_or(cfg.t_end))?;
            out.json("report.json", &report)?;
            out.write("diagnostics.csv", |w| {
                write_csv(w, &traj.records).map_err(|e| e.to_string())
            })?;
            ensure(report.pass, "decay experiment")
        }
        Command::CertifyConstants { tol, .. } => {
            let (c_lo, c_hi) = threshold(Majorant::F, *tol)?;
            let (ct_lo, ct_hi) = threshold(Majorant::G, *tol)?;
            let quarter_exact = g_closed(Ratio::new(1i64, 4)) == Ratio::from_integer(1);
            let constants = json!({
                "C_lo": c_lo,
                "C_hi": c_hi,
                "C_tilde_lo": ct_lo,
                "C_tilde_hi": ct_hi,
                "F_at_0.17": eval_f(0.17)?,
                "G_at_0.24": eval_g(0.24)?,
                "G_at_quarter_is_one": quarter_exact,
                "tol": tol,
            });
            out.json("constants.json", &constants)
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Simulate { .. } => "simulate",
        Command::ViscositySweep { .. } => "viscosity-sweep",
        Command::LinkExperiment { .. } => "link-experiment",
        Command::DecayExperiment { .. } => "decay-experiment",
        Command::CertifyConstants { .. } => "certify-constants",
    }
}

/// Runs one subcommand. Writes `error.json` next to the outputs on failure
/// and `manifest.json` in every case where the output directory is usable.
pub fn run(cmd: &Command) -> RunOutcome {
    let start = Instant::now();
    let mut manifest = RunManifest {
        command: command_name(cmd).into(),
        config_path: cmd.config_path().map(Path::to_path_buf),
        out_dir: cmd.out_dir().to_path_buf(),
        files: Vec::new(),
        exit_status: 0,
        wall_seconds: 0.0,
    };
    let mut out = match Outputs::new(cmd.out_dir()) {
        Ok(o) => o,
        Err(e) => {
            manifest.exit_status = e.exit_code();
            return RunOutcome {
                manifest,
                error: Some(e),
            };
        }
    };
    let mut error = execute(cmd, &mut out).err();
    if let Some(e) = &error {
        manifest.exit_status = e.exit_code();
        if let Err(io) = out.json("error.json", &e.to_json()) {
            error = Some(io);
        }
    }
    manifest.files = out.files.clone();
    manifest.files.push("manifest.json".into());
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    if let Err(io) = out.json("manifest.json", &manifest) {
        manifest.exit_status = io.exit_code();
        error.get_or_insert(io);
    }
    RunOutcome { manifest, error }
}
