use thiserror::Error;

/// Errors raised by the model, solvers and rate analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} must not be negative (got {value})")]
    NegativeTime { what: &'static str, value: f64 },

    #[error("state is not normalized: |c1|^2 + |c2|^2 = {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("step h = {step} too large for {scheme}: stiffness product {product:.3e} exceeds {limit}")]
    StepTooLarge {
        scheme: &'static str,
        step: f64,
        product: f64,
        limit: f64,
    },

    #[error("series grids differ: {0}")]
    GridMismatch(String),

    #[error("quadrature did not converge: estimated error {error:.3e} exceeds tolerance {tolerance:.3e}")]
    Quadrature { error: f64, tolerance: f64 },

    #[error("invalid fit window: {0}")]
    InvalidWindow(String),

    #[error("survival probability must be positive on the fit window (t = {t}, P = {value})")]
    NonPositiveSurvival { t: f64, value: f64 },

    #[error("level {level} outside (0, C(0) = {initial})")]
    InvalidLevel { level: f64, initial: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Rejects NaN and infinities for a named parameter.
pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(name, format!("must be finite (got {value})")))
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(invalid(name, format!("must be positive (got {value})")))
    }
}
