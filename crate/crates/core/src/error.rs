use thiserror::Error;

/// Errors raised by the q-exponential numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,

    #[error("non-finite value at index {idx}: {value}")]
    NonFinite { idx: usize, value: f64 },

    #[error("invalid q = {0} (must be finite and > 0)")]
    InvalidQ(f64),

    #[error("value {value} at index {idx} outside [0, 1]")]
    Range { idx: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1")]
    Normalization { sum: f64 },

    #[error("probability {0} outside (0, 1]")]
    InvalidProbability(f64),

    #[error("negative base {base} in q-exponential (x = {x}, q = {q})")]
    Domain { x: f64, q: f64, base: f64 },

    #[error("singular evaluation: {0}")]
    Singularity(&'static str),

    #[error("no real shift exists: boundary value of f is {endpoint_value} > 1")]
    Infeasible { endpoint_value: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("perturbed distribution leaves the simplex: {0}")]
    Step(String),

    #[error("target {target} outside the open energy hull ({lo}, {hi})")]
    TargetRange { target: f64, lo: f64, hi: f64 },

    #[error("no sign change for the energy constraint within feasible beta range [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
