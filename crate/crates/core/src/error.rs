use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// Negative fractional power applied to a field with a nonzero mean.
    #[error("Λ^s with s = {s} < 0 is undefined on a field with mean {mean:e}")]
    UndefinedInverse { s: f64, mean: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("field is not strictly positive (min = {min:e})")]
    NonPositiveField { min: f64 },

    #[error("blow-up detected at t = {t}: {reason}")]
    BlowUpDetected { t: f64, reason: String },
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag, used in `error.json`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "InvalidField",
            Error::UndefinedInverse { .. } => "UndefinedInverse",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::NonPositiveField { .. } => "NonPositiveField",
            Error::BlowUpDetected { .. } => "BlowUpDetected",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
