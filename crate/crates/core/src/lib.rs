//! Outage models and eavesdropper-tolerance analysis for a two-hop relay
//! network protected by cooperative jamming.
//!
//! A source reaches its destination through one of `n` half-duplex relays
//! while `m` passive eavesdroppers listen. Relays whose channel to the
//! current legitimate receiver is weaker than the noise-generating threshold
//! `tau` transmit artificial noise. The crate provides
//!
//! * closed-form transmission-outage (TOP) and secrecy-outage (SOP)
//!   probabilities for opportunistic and random relay selection
//!   ([`analytic`]),
//! * a trial-level Monte-Carlo simulator of the same protocol
//!   ([`montecarlo`]),
//! * the solver for the largest tolerable eavesdropper count under
//!   reliability and security constraints ([`capability`]),
//! * the numerical kernels these depend on ([`specialfn`]).

pub mod analytic;
pub mod capability;
pub mod channel;
mod error;
pub mod montecarlo;
pub mod specialfn;

pub use analytic::{NormalApprox, SurvivorG};
pub use capability::{CapabilityResult, Constraints, TauSolution, Tolerance};
pub use channel::{ChannelRealization, NetworkConfig, Scheme};
pub use error::{Error, Result};
pub use montecarlo::{OutageEstimate, SimJob, TrialOutcome};
pub use specialfn::{Probability, QuadratureConfig};
