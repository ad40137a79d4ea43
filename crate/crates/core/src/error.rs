use thiserror::Error;

/// Errors reported by parameter validation and the analytic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("system is not nominally stable: lambda = {lambda} >= 2 * mu = {}", 2.0 * mu)]
    NominallyUnstable { lambda: f64, mu: f64 },

    #[error("gamma is undefined for defense cost c_d = {c_d}")]
    GammaUndefined { c_d: f64 },

    #[error("closed-form defense probability has a negative radicand in `{quantity}` = {value}")]
    NegativeRadicand { quantity: &'static str, value: f64 },

    #[error("invalid simulation config `{name}`: {reason}")]
    InvalidSimConfig {
        name: &'static str,
        reason: &'static str,
    },

    #[error(
        "strategy profile (a = {a}, p = {p}, d = {d}) is unstable, simulated risk is unbounded"
    )]
    UnstableProfile { a: f64, p: f64, d: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
