use alloc::string::String;

use thiserror::Error;

use crate::angmom::HalfInt;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("angular momentum must be non-negative, got {0}")]
    NegativeAngularMomentum(HalfInt),

    #[error("F = {f} is outside [|I - J|, I + J] for I = {i}, J = {j}")]
    FOutOfRange { f: HalfInt, i: HalfInt, j: HalfInt },

    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("qubit amplitudes (alpha, beta) must not both vanish")]
    ZeroQubitVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(&'static str),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("integration failed at t = {t} us: {reason}")]
    Integration { t: f64, reason: IntegrationFailure },

    #[error(
        "cannot tell dressed states apart for target {target}: best overlaps {best} and {runner_up}"
    )]
    AmbiguousOverlap {
        target: &'static str,
        best: f64,
        runner_up: f64,
    },

    #[error("dressed energies are not balanced: e_up - e_down = {imbalance} MHz")]
    Unbalanced { imbalance: f64 },

    #[error("no sign change on bracket [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("overlap threshold {threshold} not reached below {cap} MHz (best {best})")]
    Saturated { threshold: f64, cap: f64, best: f64 },
}

/// Why a master-equation integration gave up.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationFailure {
    #[error("step size underflow (h = {h})")]
    StepUnderflow { h: f64 },

    #[error("trace drifted by {drift}")]
    TraceDrift { drift: f64 },

    #[error("hermiticity violated by {deviation}")]
    NonHermitian { deviation: f64 },

    #[error("negative eigenvalue {min_eigenvalue}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state became non-finite")]
    NonFinite,
}
