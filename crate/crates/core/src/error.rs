use thiserror::Error;

/// Errors raised by the numeric core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// Zero-norm channel, or parallel channels where a null-space beam is needed.
    #[error("{op}: degenerate geometry: {reason}")]
    Degenerate { op: &'static str, reason: String },

    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    Dimension {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    /// The objective returned NaN or an infinity.
    #[error("{op}: objective is not finite at x = {at}")]
    Evaluation { op: &'static str, at: f64 },

    /// A helper schedule that matches none of the operation modes.
    #[error("classify_mode: schedule (gamma = {gamma}, beta = {beta}) matches no mode: {reason}")]
    Classification {
        gamma: f64,
        beta: f64,
        reason: &'static str,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn degenerate(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Degenerate {
            op,
            reason: reason.into(),
        }
    }

    /// Name of the operation that failed.
    pub fn operation(&self) -> &'static str {
        match self {
            Error::Domain { op, .. }
            | Error::Degenerate { op, .. }
            | Error::Dimension { op, .. }
            | Error::Evaluation { op, .. } => op,
            Error::Classification { .. } => "classify_mode",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_unit_interval(op: &'static str, name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {x} must lie in [0, 1]")))
    }
}

pub(crate) fn ensure_non_negative(op: &'static str, name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {x} must be finite and >= 0")))
    }
}

pub(crate) fn ensure_positive(op: &'static str, name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {x} must be finite and > 0")))
    }
}
