//! Trial-level simulation of the two-hop protocol.
//!
//! Each trial draws a fresh block-fading realization from a ChaCha8 stream
//! keyed by a per-trial seed, so a job's result depends only on
//! `(config, scheme, trials, master_seed)` and not on how trials are spread
//! over worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{
    jammer_set, select_best_relay, sir, ChannelRealization, NetworkConfig, Scheme,
};
use crate::error::{Error, Result};

/// Result of one end-to-end transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub transmission_outage: bool,
    pub secrecy_outage: bool,
    pub sir_phase1: f64,
    pub sir_phase2: f64,
    pub best_index: usize,
}

/// Empirical outage probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub outages: u64,
    pub stderr: f64,
}

impl OutageEstimate {
    pub fn from_counts(outages: u64, trials: u64) -> Result<Self> {
        if trials == 0 || outages > trials {
            return Err(Error::domain(
                "OutageEstimate",
                format!("{outages} outages in {trials} trials"),
            ));
        }
        let p_hat = outages as f64 / trials as f64;
        Ok(OutageEstimate {
            p_hat,
            trials,
            outages,
            stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        })
    }
}

/// A batch of independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimJob {
    pub config: NetworkConfig,
    pub scheme: Scheme,
    pub trials: u64,
    pub master_seed: u64,
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` within a job. Injective in `index` for a fixed
/// master seed, since it composes bijections of `u64`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    mix64(master_seed ^ mix64(index))
}

/// Unit-mean exponential by inversion, `-ln(1 - u)` with `u ∈ [0, 1)`.
#[inline]
fn exp_gain<R: Rng>(rng: &mut R) -> f64 {
    -(-rng.random::<f64>()).ln_1p()
}

#[derive(Default)]
struct Scratch {
    s_to_relay: Vec<f64>,
    relay_to_d: Vec<f64>,
    jammer_to_best: Vec<f64>,
}

/// Runs one trial.
///
/// Legitimate gains are drawn first, then the relay is selected and the two
/// jammer sets fixed. Jammer-to-eavesdropper gains are drawn only for relays
/// that actually jam in the given phase; the remaining matrix entries are
/// independent of everything else and never influence the outcome.
pub fn run_trial(config: &NetworkConfig, scheme: Scheme, trial_seed: u64) -> Result<TrialOutcome> {
    config.validate()?;
    Ok(simulate(
        config,
        scheme,
        trial_seed,
        &mut Scratch::default(),
    ))
}

fn simulate(
    config: &NetworkConfig,
    scheme: Scheme,
    seed: u64,
    scratch: &mut Scratch,
) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.n as usize;
    let tau = config.tau;

    fill_gains(&mut rng, &mut scratch.s_to_relay, n);
    fill_gains(&mut rng, &mut scratch.relay_to_d, n);
    let b = match scheme {
        Scheme::Opportunistic => select_best_relay(&scratch.s_to_relay, &scratch.relay_to_d)
            .expect("n >= 1 checked by validate"),
        Scheme::Random => rng.random_range(0..n),
    };
    fill_gains(&mut rng, &mut scratch.jammer_to_best, n);

    let mut jammers1 = 0usize;
    let mut interference1 = 0.0;
    let mut jammers2 = 0usize;
    let mut interference2 = 0.0;
    for j in (0..n).filter(|&j| j != b) {
        let g1 = scratch.jammer_to_best[j];
        if g1 < tau {
            jammers1 += 1;
            interference1 += g1;
        }
        let g2 = scratch.relay_to_d[j];
        if g2 < tau {
            jammers2 += 1;
            interference2 += g2;
        }
    }
    let sir_phase1 = sir(scratch.s_to_relay[b], [interference1]);
    let sir_phase2 = sir(scratch.relay_to_d[b], [interference2]);
    let transmission_outage = sir_phase1 < config.gamma || sir_phase2 < config.gamma;

    let secrecy_outage = phase_intercepted(&mut rng, config.m, jammers1, config.gamma_e)
        || phase_intercepted(&mut rng, config.m, jammers2, config.gamma_e);

    TrialOutcome {
        transmission_outage,
        secrecy_outage,
        sir_phase1,
        sir_phase2,
        best_index: b,
    }
}

fn fill_gains<R: Rng>(rng: &mut R, buf: &mut Vec<f64>, len: usize) {
    buf.clear();
    buf.extend((0..len).map(|_| exp_gain(rng)));
}

/// Whether any of `m` eavesdroppers reaches `gamma_e` against `jammers`
/// active noise sources. Stops drawing at the first successful one.
fn phase_intercepted<R: Rng>(rng: &mut R, m: u64, jammers: usize, gamma_e: f64) -> bool {
    (0..m).any(|_| {
        let signal = exp_gain(rng);
        let interference: f64 = (0..jammers).map(|_| exp_gain(rng)).sum();
        sir(signal, [interference]) >= gamma_e
    })
}

impl ChannelRealization {
    /// Draws every gain of one coherence interval.
    pub fn sample<R: Rng>(n: usize, m: usize, rng: &mut R) -> Self {
        let mut draw = |len: usize| -> Vec<f64> { (0..len).map(|_| exp_gain(rng)).collect() };
        let s_to_relay = draw(n);
        let relay_to_d = draw(n);
        let jammer_to_best = draw(n);
        let s_to_eaves = draw(m);
        let best_to_eaves = draw(m);
        let jammer_to_eaves_phase1 = (0..n).map(|_| draw(m)).collect();
        let jammer_to_eaves_phase2 = (0..n).map(|_| draw(m)).collect();
        ChannelRealization {
            s_to_relay,
            relay_to_d,
            jammer_to_best,
            s_to_eaves,
            best_to_eaves,
            jammer_to_eaves_phase1,
            jammer_to_eaves_phase2,
        }
    }

    /// Evaluates both outage events for relay `best` forwarding.
    pub fn outcome(&self, config: &NetworkConfig, best: usize) -> TrialOutcome {
        let r1 = jammer_set(&self.jammer_to_best, best, config.tau);
        let r2 = jammer_set(&self.relay_to_d, best, config.tau);
        let sir_phase1 = sir(
            self.s_to_relay[best],
            r1.iter().map(|&j| self.jammer_to_best[j]),
        );
        let sir_phase2 = sir(
            self.relay_to_d[best],
            r2.iter().map(|&j| self.relay_to_d[j]),
        );
        let leaks = |signal: &[f64], jam: &[Vec<f64>], set: &[usize]| {
            signal
                .iter()
                .enumerate()
                .any(|(i, &s)| sir(s, set.iter().map(|&j| jam[j][i])) >= config.gamma_e)
        };
        TrialOutcome {
            transmission_outage: sir_phase1 < config.gamma || sir_phase2 < config.gamma,
            secrecy_outage: leaks(&self.s_to_eaves, &self.jammer_to_eaves_phase1, &r1)
                || leaks(&self.best_to_eaves, &self.jammer_to_eaves_phase2, &r2),
            sir_phase1,
            sir_phase2,
            best_index: best,
        }
    }
}

/// Runs every trial of `job` and returns the (TOP, SOP) estimates, both
/// taken from the same trials.
pub fn estimate(job: &SimJob) -> Result<(OutageEstimate, OutageEstimate)> {
    job.config.validate()?;
    if job.trials == 0 {
        return Err(Error::domain("estimate", "trials must be >= 1"));
    }
    let (top, sop) = (0..job.trials)
        .into_par_iter()
        .map_init(Scratch::default, |scratch, i| {
            let o = simulate(
                &job.config,
                job.scheme,
                trial_seed(job.master_seed, i),
                scratch,
            );
            (o.transmission_outage as u64, o.secrecy_outage as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok((
        OutageEstimate::from_counts(top, job.trials)?,
        OutageEstimate::from_counts(sop, job.trials)?,
    ))
}

const MOMENT_CHUNK: u64 = 4096;

/// Sample mean and standard deviation of the per-phase interference
/// `Σ_{j=1}^{n-1} X_j 1{X_j < τ}`.
pub fn estimate_interference_moments(
    n: u64,
    tau: f64,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    const OP: &str = "estimate_interference_moments";
    if n == 0 {
        return Err(Error::domain(OP, "n must be >= 1"));
    }
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::domain(OP, format!("tau = {tau} must be >= 0")));
    }
    if samples < 10_000 {
        return Err(Error::domain(
            OP,
            format!("samples = {samples} must be >= 10000"),
        ));
    }
    let chunks = samples.div_ceil(MOMENT_CHUNK);
    // (count, mean, sum of squared deviations) per chunk, merged in order.
    let partials: Vec<(f64, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * MOMENT_CHUNK;
            let end = (start + MOMENT_CHUNK).min(samples);
            let mut count = 0.0;
            let mut mean = 0.0;
            let mut m2 = 0.0;
            for i in start..end {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, i));
                let x: f64 = (1..n)
                    .map(|_| exp_gain(&mut rng))
                    .filter(|&g| g < tau)
                    .sum();
                count += 1.0;
                let delta = x - mean;
                mean += delta / count;
                m2 += delta * (x - mean);
            }
            (count, mean, m2)
        })
        .collect();
    let (count, mean, m2) =
        partials
            .into_iter()
            .fold((0.0, 0.0, 0.0), |(na, ma, sa), (nb, mb, sb)| {
                let total = na + nb;
                let delta = mb - ma;
                (
                    total,
                    ma + delta * nb / total,
                    sa + sb + delta * delta * na * nb / total,
                )
            });
    Ok((mean, (m2 / (count - 1.0)).sqrt()))
}
