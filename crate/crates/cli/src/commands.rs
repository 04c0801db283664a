//! Single-point commands. Each returns a serializable record with its
//! inputs echoed next to the outputs.

use jamtol_core::analytic::{sop, survivor_g, top_opportunistic, top_random};
use jamtol_core::capability::{capability, capability_at_tau};
use jamtol_core::montecarlo::estimate;
use jamtol_core::{
    CapabilityResult, Constraints, NetworkConfig, OutageEstimate, Probability, QuadratureConfig,
    Scheme, SimJob,
};
use serde::Serialize;

use crate::args::{CapabilityArgs, SimulateArgs, SopArgs, TopArgs};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct TopRecord {
    pub command: &'static str,
    pub scheme: Scheme,
    pub n: u64,
    pub tau: f64,
    pub gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    pub top: Probability,
}

#[derive(Debug, Clone, Serialize)]
pub struct SopRecord {
    pub command: &'static str,
    pub n: u64,
    pub m: u64,
    pub tau: f64,
    pub gamma_e: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_e: Option<f64>,
    pub sop: Probability,
    /// Probability that one hop stays secret against every eavesdropper.
    pub survivor_g: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateRecord {
    pub command: &'static str,
    pub scheme: Scheme,
    pub n: u64,
    pub m: u64,
    pub tau: f64,
    pub gamma: f64,
    pub gamma_e: f64,
    pub trials: u64,
    pub seed: u64,
    pub top: OutageEstimate,
    pub sop: OutageEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapabilityRecord {
    pub command: &'static str,
    pub n: u64,
    pub gamma: f64,
    pub gamma_e: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_t: Option<f64>,
    pub eps_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_override: Option<f64>,
    #[serde(flatten)]
    pub result: CapabilityResult,
}

pub fn analytic_top(
    scheme: Scheme,
    n: u64,
    gamma: f64,
    tau: f64,
) -> jamtol_core::Result<Probability> {
    match scheme {
        Scheme::Opportunistic => top_opportunistic(n, gamma, tau, &QuadratureConfig::default()),
        Scheme::Random => top_random(n, gamma, tau),
    }
}

pub fn run_top(args: &TopArgs) -> Result<TopRecord, CliError> {
    let gamma = args.main.resolve()?;
    Ok(TopRecord {
        command: "top",
        scheme: args.scheme,
        n: args.n,
        tau: args.tau,
        gamma,
        rate: args.main.rate,
        top: analytic_top(args.scheme, args.n, gamma, args.tau)?,
    })
}

pub fn run_sop(args: &SopArgs) -> Result<SopRecord, CliError> {
    let gamma_e = args.eave.resolve()?;
    Ok(SopRecord {
        command: "sop",
        n: args.n,
        m: args.m,
        tau: args.tau,
        gamma_e,
        rate_e: args.eave.rate_e,
        sop: sop(args.n, args.m, args.tau, gamma_e)?,
        survivor_g: survivor_g(args.m, args.n, args.tau, gamma_e)?.value(),
    })
}

pub fn run_simulate(args: &SimulateArgs) -> Result<SimulateRecord, CliError> {
    let gamma = args.main.resolve()?;
    let gamma_e = args.eave.resolve()?;
    let job = SimJob {
        config: NetworkConfig::new(args.n, args.m, gamma, gamma_e, args.tau)?,
        scheme: args.scheme,
        trials: args.trials,
        master_seed: args.seed,
    };
    let (top, sop) = estimate(&job)?;
    Ok(SimulateRecord {
        command: "simulate",
        scheme: args.scheme,
        n: args.n,
        m: args.m,
        tau: args.tau,
        gamma,
        gamma_e,
        trials: args.trials,
        seed: args.seed,
        top,
        sop,
    })
}

pub fn run_capability(args: &CapabilityArgs) -> Result<CapabilityRecord, CliError> {
    let gamma = args.main.resolve()?;
    let gamma_e = args.eave.resolve()?;
    let cfg = QuadratureConfig::default();
    let result = match (args.tau_override, args.eps_t) {
        (Some(tau), _) => {
            capability_at_tau(args.scheme, args.n, gamma, gamma_e, tau, args.eps_s, &cfg)?
        }
        (None, Some(eps_t)) => {
            let c = Constraints::new(eps_t, args.eps_s)?;
            capability(args.scheme, args.n, gamma, gamma_e, c, &cfg)?
        }
        (None, None) => {
            return Err(CliError::Usage(
                "--eps-t is required without --tau-override".into(),
            ))
        }
    };
    Ok(CapabilityRecord {
        command: "capability",
        n: args.n,
        gamma,
        gamma_e,
        eps_t: args.eps_t,
        eps_s: args.eps_s,
        tau_override: args.tau_override,
        result,
    })
}
