use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported weight {0}: only even weights >= 12 (or 4, 6 for Eisenstein series) are supported")]
    UnsupportedWeight(i64),

    #[error("invalid recipe term `{term}`: {reason}")]
    Recipe { term: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid twist {a}/{c}: the denominator must be nonzero")]
    InvalidTwist { a: i64, c: i64 },

    #[error("s = {sigma} + {t}i is outside the half plane Re(s) > 0")]
    HalfPlane { sigma: f64, t: f64 },

    #[error("coefficients needed up to n = {needed} but only {available} are available{}", .sigma.map(|s| format!(" (budget fails at sigma = {s})")).unwrap_or_default())]
    Coverage {
        needed: usize,
        available: usize,
        sigma: Option<f64>,
    },

    #[error("{what}: accuracy target not met (achieved defect {achieved:e})")]
    Accuracy { what: String, achieved: f64 },

    #[error("tail budget exceeded: certified tail bound {tail:e} is not below |value| = {value:e}")]
    TailBudget { tail: f64, value: f64 },

    #[error("exact multiplication capacity exceeded: {0}")]
    Capacity(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Coverage and tail-budget failures mean "more data needed" rather than a bad request.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Coverage { .. } | Error::TailBudget { .. } | Error::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
