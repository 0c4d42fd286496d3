//! Numerics for the q-exponential distribution
//! `p_i = [1 - (q-1)(x_i - a)]^{1/(q-1)}` and the entropy it maximizes,
//! `I = (1 - Σ p_i^q) / (q(q-1))`.
//!
//! - [`qfactor`]: the deformed exponential, its inverse, and the domain types
//!   ([`QParam`], [`Spectrum`], [`Distribution`]).
//! - [`shift`]: the partition sum `f(a)` and the shift `a₀` solving `f(a₀) = 1`.
//! - [`entropy`]: the uncertainty measure, Boltzmann-Gibbs and Tsallis
//!   baselines, the composition law, and two-state sweeps.
//! - [`maxent`]: Lagrange-multiplier reconstruction, β inversion and the
//!   self-referential escort distribution.

#![forbid(unsafe_code)]

pub mod entropy;
mod error;
pub mod maxent;
pub mod qfactor;
pub mod shift;

pub use entropy::{
    bg_entropy, compose, max_uncertainty, sweep_header, tsallis_entropy, two_state_sweep, uncertainty,
    varentropy_residual, CompositionResult, SweepTable,
};
pub use error::{Error, Result};
pub use maxent::{
    escort_distribution, escort_map, lagrange_distribution, maxent_distribution, solve_beta,
    stationarity_residual, BetaSolution, EscortOptions, EscortSolution, LagrangeParams,
};
pub use qfactor::{
    inverse_q_factor, q_factor, validate_distribution, Distribution, Mode, QClass, QParam,
    Spectrum, NORMALIZATION_TOL,
};
pub use shift::{
    domain_endpoint, feasibility, partition_derivative, partition_value, shifted_distribution,
    shifted_distribution_with, solve_shift, solve_shift_with, FeasibilityReport, Method,
    ShiftOptions, ShiftSolution, RESIDUAL_CONTRACT,
};
