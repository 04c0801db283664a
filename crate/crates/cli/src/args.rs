use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use jamtol_core::channel::rate_to_threshold;
use jamtol_core::Scheme;

use crate::CliError;

/// SIR thresholds used when neither `--gamma` nor `--rate` is given.
pub const DEFAULT_GAMMA: f64 = 10.0;
pub const DEFAULT_GAMMA_E: f64 = 0.5;
pub const DEFAULT_TRIALS: u64 = 100_000;

/// Outage probabilities and eavesdropper tolerance for two-hop relaying
/// with cooperative jamming.
#[derive(Debug, Parser)]
#[command(name = "jamtol", version, about)]
pub struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic transmission-outage probability.
    Top(TopArgs),
    /// Analytic secrecy-outage probability.
    Sop(SopArgs),
    /// Monte-Carlo estimate of both outage probabilities.
    Simulate(SimulateArgs),
    /// Optimal threshold and largest tolerable eavesdropper count.
    Capability(CapabilityArgs),
    /// Evaluate a parameter grid described by a JSON spec file.
    Sweep(SweepArgs),
}

/// Legitimate-link SIR threshold, either directly or as a target rate.
#[derive(Debug, Clone, Args)]
pub struct MainThreshold {
    /// SIR threshold of the legitimate hops.
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    pub gamma: f64,

    /// Target rate in bit/s/Hz; overrides --gamma with 2^rate - 1.
    #[arg(long, conflicts_with = "gamma")]
    pub rate: Option<f64>,
}

impl MainThreshold {
    pub fn resolve(&self) -> Result<f64, CliError> {
        resolve_threshold(self.gamma, self.rate)
    }
}

/// Eavesdropper SIR threshold, either directly or as a rate.
#[derive(Debug, Clone, Args)]
pub struct EaveThreshold {
    /// SIR threshold above which an eavesdropper decodes.
    #[arg(long = "gamma-e", default_value_t = DEFAULT_GAMMA_E)]
    pub gamma_e: f64,

    /// Eavesdropper rate in bit/s/Hz; overrides --gamma-e with 2^rate - 1.
    #[arg(long = "rate-e", conflicts_with = "gamma_e")]
    pub rate_e: Option<f64>,
}

impl EaveThreshold {
    pub fn resolve(&self) -> Result<f64, CliError> {
        resolve_threshold(self.gamma_e, self.rate_e)
    }
}

pub(crate) fn resolve_threshold(gamma: f64, rate: Option<f64>) -> Result<f64, CliError> {
    match rate {
        Some(r) => Ok(rate_to_threshold(r)?),
        None => Ok(gamma),
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutPath {
    /// Write the record to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TopArgs {
    #[arg(long, default_value_t = Scheme::Opportunistic)]
    pub scheme: Scheme,
    /// Number of relays.
    #[arg(long)]
    pub n: u64,
    /// Noise-generation threshold.
    #[arg(long)]
    pub tau: f64,
    #[command(flatten)]
    pub main: MainThreshold,
    #[command(flatten)]
    pub out: OutPath,
}

#[derive(Debug, Clone, Args)]
pub struct SopArgs {
    /// Number of relays.
    #[arg(long)]
    pub n: u64,
    /// Number of eavesdroppers.
    #[arg(long)]
    pub m: u64,
    /// Noise-generation threshold.
    #[arg(long)]
    pub tau: f64,
    #[command(flatten)]
    pub eave: EaveThreshold,
    #[command(flatten)]
    pub out: OutPath,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = Scheme::Opportunistic)]
    pub scheme: Scheme,
    /// Number of relays.
    #[arg(long)]
    pub n: u64,
    /// Number of eavesdroppers.
    #[arg(long, default_value_t = 0)]
    pub m: u64,
    /// Noise-generation threshold.
    #[arg(long)]
    pub tau: f64,
    #[command(flatten)]
    pub main: MainThreshold,
    #[command(flatten)]
    pub eave: EaveThreshold,
    /// Number of independent fading blocks.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutPath,
}

#[derive(Debug, Clone, Args)]
pub struct CapabilityArgs {
    #[arg(long, default_value_t = Scheme::Opportunistic)]
    pub scheme: Scheme,
    /// Number of relays.
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub main: MainThreshold,
    #[command(flatten)]
    pub eave: EaveThreshold,
    /// Transmission-outage budget; required unless --tau-override is set.
    #[arg(long = "eps-t", required_unless_present = "tau_override")]
    pub eps_t: Option<f64>,
    /// Secrecy-outage budget.
    #[arg(long = "eps-s")]
    pub eps_s: f64,
    /// Skip the threshold search and evaluate the tolerance at this tau.
    #[arg(long = "tau-override", value_name = "TAU")]
    pub tau_override: Option<f64>,
    #[command(flatten)]
    pub out: OutPath,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// JSON grid specification.
    #[arg(long, value_name = "PATH")]
    pub spec: PathBuf,
    /// CSV destination; the manifest is written next to it.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}
