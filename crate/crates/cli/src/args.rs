use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "qexp",
    version,
    about = "q-exponential normalization, entropy and MaxEnt numerics",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the shift a0 that normalizes the q-exponential weights.
    Shift(ShiftArgs),
    /// Uncertainty, Tsallis and Boltzmann-Gibbs entropies of a distribution.
    Entropy(EntropyArgs),
    /// Two-state entropy curves (or the partition sum f(a)) as CSV.
    Sweep(SweepArgs),
    /// MaxEnt distribution at a given beta or target mean energy.
    Maxent(MaxentArgs),
    /// Composition law for two independent subsystems.
    Compose(ComposeArgs),
    /// Self-referential escort distribution by damped fixed-point iteration.
    Escort(EscortArgs),
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    /// Spectrum JSON file: {"values": [...]}
    pub spectrum: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Use the bracketing solver even where a closed form exists.
    #[arg(long)]
    pub no_closed_form: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["probs", "spectrum"])))]
pub struct EntropyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    /// Comma-separated probabilities.
    #[arg(long, allow_hyphen_values = true)]
    pub probs: Option<String>,
    /// Spectrum file; entropies are evaluated on its self-normalized distribution.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated q values (a single value in --partition mode).
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub q: Vec<f64>,
    #[arg(long, default_value_t = 201)]
    pub n: usize,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit (a, f(a)) for a spectrum instead of two-state entropy curves.
    #[arg(long, requires_all = ["spectrum", "a_min", "a_max"])]
    pub partition: bool,
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub a_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a_max: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("constraint").required(true).args(["beta", "target_u"])))]
pub struct MaxentArgs {
    pub spectrum: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub target_u: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Probabilities of subsystem A.
    #[arg(long)]
    pub a: String,
    /// Probabilities of subsystem B.
    #[arg(long)]
    pub b: String,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct EscortArgs {
    pub spectrum: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub q_tilde: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub damping: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}
