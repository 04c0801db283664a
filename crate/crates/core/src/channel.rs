//! Two-hop network model: configuration, relay selection, jammer sets and
//! signal-to-interference ratios.
//!
//! The network is interference-limited and every transmitter uses the same
//! power, so power cancels from every SIR and is not modelled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relay selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Relay maximizing `min(|h_{S,R_j}|², |h_{R_j,D}|²)`.
    Opportunistic,
    /// Relay drawn uniformly at random.
    Random,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Opportunistic => "opportunistic",
            Scheme::Random => "random",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "opportunistic" | "best" | "bst" => Ok(Scheme::Opportunistic),
            "random" | "ran" => Ok(Scheme::Random),
            _ => Err(Error::domain("Scheme", format!("unknown scheme {s:?}"))),
        }
    }
}

/// One network scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Number of relays.
    pub n: u64,
    /// Number of eavesdroppers.
    pub m: u64,
    /// SIR a legitimate receiver needs to decode.
    pub gamma: f64,
    /// SIR an eavesdropper needs to decode.
    pub gamma_e: f64,
    /// Noise-generating threshold.
    pub tau: f64,
}

impl NetworkConfig {
    pub fn new(n: u64, m: u64, gamma: f64, gamma_e: f64, tau: f64) -> Result<Self> {
        let cfg = NetworkConfig {
            n,
            m,
            gamma,
            gamma_e,
            tau,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("NetworkConfig", "n must be >= 1"));
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::domain(
                "NetworkConfig",
                format!("gamma = {} must be > 0", self.gamma),
            ));
        }
        if !self.gamma_e.is_finite() || self.gamma_e <= 0.0 {
            return Err(Error::domain(
                "NetworkConfig",
                format!("gamma_e = {} must be > 0", self.gamma_e),
            ));
        }
        if !self.tau.is_finite() || self.tau < 0.0 {
            return Err(Error::domain(
                "NetworkConfig",
                format!("tau = {} must be >= 0", self.tau),
            ));
        }
        Ok(())
    }
}

/// Channel gains `|h_{A,B}|²` of one coherence interval.
///
/// Every entry is an independent unit-mean exponential. The jammer-to-
/// eavesdropper matrices are indexed `[relay][eavesdropper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub s_to_relay: Vec<f64>,
    pub relay_to_d: Vec<f64>,
    /// Gains from each relay to the selected relay; the selected entry is unused.
    pub jammer_to_best: Vec<f64>,
    pub s_to_eaves: Vec<f64>,
    pub best_to_eaves: Vec<f64>,
    pub jammer_to_eaves_phase1: Vec<Vec<f64>>,
    pub jammer_to_eaves_phase2: Vec<Vec<f64>>,
}

/// Index of the relay with the largest bottleneck gain; ties go to the
/// lowest index.
pub fn select_best_relay(s_to_relay: &[f64], relay_to_d: &[f64]) -> Result<usize> {
    if s_to_relay.is_empty() || s_to_relay.len() != relay_to_d.len() {
        return Err(Error::domain(
            "select_best_relay",
            format!(
                "gain vectors must be non-empty and equal length (got {} and {})",
                s_to_relay.len(),
                relay_to_d.len()
            ),
        ));
    }
    let mut best = 0;
    let mut best_gain = f64::NEG_INFINITY;
    for (j, (&a, &b)) in s_to_relay.iter().zip(relay_to_d).enumerate() {
        let g = a.min(b);
        if g > best_gain {
            best = j;
            best_gain = g;
        }
    }
    Ok(best)
}

/// Relays other than `excluded` whose gain to the receiver is strictly
/// below `tau`.
pub fn jammer_set(gains_to_receiver: &[f64], excluded: usize, tau: f64) -> Vec<usize> {
    gains_to_receiver
        .iter()
        .enumerate()
        .filter(|&(j, &g)| j != excluded && g < tau)
        .map(|(j, _)| j)
        .collect()
}

/// `signal / Σ interference`.
///
/// Zero total interference yields `+∞`, including the `0 / 0` case: with no
/// jammer active the receiver is treated as able to decode.
pub fn sir<I>(signal_gain: f64, interferer_gains: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let interference: f64 = interferer_gains.into_iter().sum();
    if interference > 0.0 {
        signal_gain / interference
    } else {
        f64::INFINITY
    }
}

/// Converts a code rate in bits per channel use to its SIR threshold,
/// `2^rate - 1`.
pub fn rate_to_threshold(rate: f64) -> Result<f64> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::domain(
            "rate_to_threshold",
            format!("rate = {rate} must be >= 0"),
        ));
    }
    Ok(rate.exp2() - 1.0)
}
