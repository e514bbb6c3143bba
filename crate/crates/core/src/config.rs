//! JSON run configuration.
//!
//! ```json
//! {"model": "arctan", "n": 256, "t_end": 1.0, "snap_every": 0.1,
//!  "initial": {"mean": 1.0, "modes": [{"k": 1, "cos_amp": 0.5, "sin_amp": 0.0}]}}
//! ```
//!
//! Top-level keys: `model` (`arctan`, `viscous`, `cccf`, `porous`), `n`,
//! `t_end`, `cfl` (0.5), `snap_every` (`t_end`), `dealias` (true), `nu`
//! (viscous only), `m` (porous only), `diag_sym_every` (0), `scheme`
//! (`rk4` or `ifrk4`), `dt_max`, `initial`. The initial block holds either
//! `mean` plus `modes`, or raw node `values`, and an optional `mollify_eps`.
//! Unknown keys are rejected.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::dynamics::{InitialSpec, Mode, ModelKind, Scheme, SimConfig};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },
}

impl ConfigError {
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { field, .. } => Some(field),
            ConfigError::Parse { .. } => None,
        }
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.to_string(),
        reason: reason.into(),
    }
}

const TOP_KEYS: &[&str] = &[
    "model",
    "n",
    "t_end",
    "cfl",
    "snap_every",
    "dealias",
    "nu",
    "m",
    "diag_sym_every",
    "scheme",
    "dt_max",
    "initial",
];
const INITIAL_KEYS: &[&str] = &["mean", "modes", "values", "mollify_eps"];
const MODE_KEYS: &[&str] = &["k", "cos_amp", "sin_amp"];

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, ConfigError> {
    v.as_object()
        .ok_or_else(|| invalid(field, "expected a JSON object"))
}

fn reject_unknown(
    map: &Map<String, Value>,
    allowed: &[&str],
    prefix: &str,
) -> Result<(), ConfigError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(invalid(&format!("{prefix}{k}"), "unknown key")),
        None => Ok(()),
    }
}

fn number(map: &Map<String, Value>, key: &str, field: &str) -> Result<Option<f64>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| invalid(field, "expected a number")),
    }
}

fn required_number(map: &Map<String, Value>, key: &str, field: &str) -> Result<f64, ConfigError> {
    number(map, key, field)?.ok_or_else(|| invalid(field, "missing"))
}

fn unsigned(map: &Map<String, Value>, key: &str) -> Result<Option<u64>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| invalid(key, "expected a non-negative integer")),
    }
}

fn initial(v: &Value) -> Result<InitialSpec, ConfigError> {
    let map = object(v, "initial")?;
    reject_unknown(map, INITIAL_KEYS, "initial.")?;
    let mollify_eps = number(map, "mollify_eps", "initial.mollify_eps")?;
    let spec = match (map.get("values"), map.get("modes")) {
        (Some(_), _) if map.contains_key("modes") || map.contains_key("mean") => {
            return Err(invalid(
                "initial",
                "give either mean/modes or values, not both",
            ))
        }
        (Some(values), _) => {
            let arr = values
                .as_array()
                .ok_or_else(|| invalid("initial.values", "expected an array of numbers"))?;
            let values = arr
                .iter()
                .map(|x| x.as_f64())
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| invalid("initial.values", "expected an array of numbers"))?;
            InitialSpec::values(values)
        }
        (None, modes) => {
            let mean = required_number(map, "mean", "initial.mean")?;
            let modes = match modes {
                None => Vec::new(),
                Some(m) => m
                    .as_array()
                    .ok_or_else(|| invalid("initial.modes", "expected an array"))?
                    .iter()
                    .map(mode)
                    .collect::<Result<Vec<_>, _>>()?,
            };
            InitialSpec::modes(mean, modes)
        }
    };
    Ok(InitialSpec {
        mollify_eps,
        ..spec
    })
}

fn mode(v: &Value) -> Result<Mode, ConfigError> {
    let map = object(v, "initial.modes")?;
    reject_unknown(map, MODE_KEYS, "initial.modes.")?;
    let k = map
        .get("k")
        .and_then(Value::as_u64)
        .filter(|&k| k >= 1 && k <= u32::MAX as u64)
        .ok_or_else(|| invalid("initial.modes.k", "expected an integer >= 1"))?;
    Ok(Mode {
        k: k as u32,
        cos_amp: number(map, "cos_amp", "initial.modes.cos_amp")?.unwrap_or(0.0),
        sin_amp: number(map, "sin_amp", "initial.modes.sin_amp")?.unwrap_or(0.0),
    })
}

/// Parses and validates a run configuration, including the positivity of
/// the initial data for models that need it.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let cfg = parse_config_shape(text)?;
    cfg.initial_field().map_err(as_validation)?;
    Ok(cfg)
}

/// Like [`parse_config`] without evaluating the initial data. Used where the
/// initial block only describes a mean and a perturbation profile.
pub fn parse_config_shape(text: &str) -> Result<SimConfig, ConfigError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let map = object(&root, "config")?;
    reject_unknown(map, TOP_KEYS, "")?;

    let model_name = map
        .get("model")
        .ok_or_else(|| invalid("model", "missing"))?
        .as_str()
        .ok_or_else(|| invalid("model", "expected a string"))?;
    let nu = number(map, "nu", "nu")?;
    let m = unsigned(map, "m")?;
    let model = match model_name {
        "arctan" => ModelKind::Arctan,
        "viscous" => ModelKind::ViscousArctan {
            nu: nu.ok_or_else(|| invalid("nu", "required for the viscous model"))?,
        },
        "cccf" => ModelKind::Cccf,
        "porous" => ModelKind::Porous {
            m: m.ok_or_else(|| invalid("m", "required for the porous model"))?
                .try_into()
                .map_err(|_| invalid("m", "too large"))?,
        },
        other => {
            return Err(invalid(
                "model",
                format!("unknown model `{other}` (arctan, viscous, cccf, porous)"),
            ))
        }
    };
    if nu.is_some() && model_name != "viscous" {
        return Err(invalid("nu", "only allowed for the viscous model"));
    }
    if m.is_some() && model_name != "porous" {
        return Err(invalid("m", "only allowed for the porous model"));
    }

    let n = unsigned(map, "n")?.ok_or_else(|| invalid("n", "missing"))? as usize;
    let t_end = required_number(map, "t_end", "t_end")?;
    let mut cfg = SimConfig::new(
        model,
        n,
        t_end,
        initial(
            map.get("initial")
                .ok_or_else(|| invalid("initial", "missing"))?,
        )?,
    );
    if let Some(cfl) = number(map, "cfl", "cfl")? {
        cfg.cfl = cfl;
    }
    if let Some(s) = number(map, "snap_every", "snap_every")? {
        cfg.snap_every = s;
    }
    if let Some(d) = map.get("dealias") {
        cfg.dealias = d
            .as_bool()
            .ok_or_else(|| invalid("dealias", "expected a boolean"))?;
    }
    if let Some(every) = unsigned(map, "diag_sym_every")? {
        cfg.diag_sym_every = every as usize;
    }
    cfg.dt_max = number(map, "dt_max", "dt_max")?;
    cfg.scheme = match map.get("scheme") {
        None => None,
        Some(s) => Some(match s.as_str() {
            Some("rk4") => Scheme::Rk4,
            Some("ifrk4") => Scheme::IfRk4,
            _ => return Err(invalid("scheme", "expected \"rk4\" or \"ifrk4\"")),
        }),
    };

    cfg.validate().map_err(as_validation)?;
    Ok(cfg)
}

fn as_validation(e: Error) -> ConfigError {
    match e {
        Error::InvalidParameter { name, reason } => {
            let field = match name.as_str() {
                "values" | "modes.k" => format!("initial.{name}"),
                "mollify_eps" => "initial.mollify_eps".into(),
                _ => name,
            };
            invalid(&field, reason)
        }
        Error::NonPositiveField { min } => invalid(
            "initial",
            format!("initial data must be strictly positive for this model (min = {min:e})"),
        ),
        other => invalid("initial", other.to_string()),
    }
}
