//! Eavesdropper-tolerance capability.
//!
//! TOP grows with the noise-generating threshold `tau` while the survivor
//! function `G(m, n, tau)` grows with `tau` and falls with `m`. The best
//! threshold is therefore the largest one meeting the reliability
//! constraint, and the capability is the largest `m` whose `G` at that
//! threshold still meets the security constraint. Both searches are plain
//! bisections on monotone functions.

use serde::Serialize;

use crate::analytic::{random_hop_deficit, survivor_g, top_opportunistic, top_random};
use crate::channel::Scheme;
use crate::error::{Error, Result};
use crate::specialfn::QuadratureConfig;

/// Largest noise-generating threshold searched.
pub const TAU_CAP: f64 = 50.0;
/// Largest eavesdropper count searched.
pub const M_CAP: u64 = 1_000_000_000;
/// Bracket width at which the threshold search stops.
pub const TAU_TOL: f64 = 1e-9;
/// Residual `|TOP - eps_t|` at which the threshold search stops.
pub const TOP_TOL: f64 = 1e-9;
const TAU_START: f64 = 1e-3;

/// Reliability and security requirements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constraints {
    /// Largest acceptable transmission outage probability.
    pub eps_t: f64,
    /// Largest acceptable secrecy outage probability.
    pub eps_s: f64,
}

impl Constraints {
    pub fn new(eps_t: f64, eps_s: f64) -> Result<Self> {
        for (name, v) in [("eps_t", eps_t), ("eps_s", eps_s)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(
                    "Constraints",
                    format!("{name} = {v} outside [0, 1]"),
                ));
            }
        }
        Ok(Constraints { eps_t, eps_s })
    }

    fn require_open(&self) -> Result<()> {
        open_unit("capability", "eps_t", self.eps_t)?;
        open_unit("capability", "eps_s", self.eps_s)
    }
}

fn open_unit(op: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::domain(
            op,
            format!("{name} = {v} must lie in (0, 1)"),
        ));
    }
    Ok(())
}

/// Outcome of the threshold search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauSolution {
    pub tau: f64,
    /// TOP at `tau`.
    pub top: f64,
    /// `false` when TOP stays below `eps_t` all the way to [`TAU_CAP`]; the
    /// solution is then the cap itself.
    pub binding: bool,
}

/// Outcome of the eavesdropper-count search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub m: u64,
    /// `true` when the search stopped at [`M_CAP`] without a violation.
    pub capped: bool,
}

/// Optimal threshold and capability for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapabilityResult {
    pub scheme: Scheme,
    pub tau_opt: f64,
    pub m_star: u64,
    pub top_at_tau: f64,
    pub g_at_mstar: f64,
    pub g_at_mstar_plus1: f64,
    /// `sqrt(1 - eps_s)`, the bound `G` has to reach.
    pub g_threshold: f64,
    pub tau_binding: bool,
    pub m_capped: bool,
}

/// Finds the smallest `tau` at which `top(tau)` reaches `target`, assuming
/// `top` is nondecreasing with `top(0) = 0`.
fn solve_increasing<F>(mut top: F, target: f64, width_tol: f64) -> Result<TauSolution>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = 0.0;
    let mut p_lo = 0.0;
    let mut hi = TAU_START;
    let mut p_hi = top(hi)?;
    while p_hi < target {
        if hi >= TAU_CAP {
            return Ok(TauSolution {
                tau: TAU_CAP,
                top: p_hi,
                binding: false,
            });
        }
        lo = hi;
        p_lo = p_hi;
        hi = (2.0 * hi).min(TAU_CAP);
        p_hi = top(hi)?;
    }
    while hi - lo > width_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = top(mid)?;
        if (p - target).abs() <= TOP_TOL {
            return Ok(TauSolution {
                tau: mid,
                top: p,
                binding: true,
            });
        }
        if p < target {
            lo = mid;
            p_lo = p;
        } else {
            hi = mid;
        }
    }
    // `lo` is the feasible end of the final bracket.
    Ok(TauSolution {
        tau: lo,
        top: p_lo,
        binding: true,
    })
}

/// Threshold at which opportunistic-relaying TOP equals `eps_t`.
pub fn solve_tau_opportunistic(
    n: u64,
    gamma: f64,
    eps_t: f64,
    cfg: &QuadratureConfig,
) -> Result<TauSolution> {
    open_unit("solve_tau_opportunistic", "eps_t", eps_t)?;
    solve_increasing(
        |tau| top_opportunistic(n, gamma, tau, cfg).map(f64::from),
        eps_t,
        TAU_TOL,
    )
}

/// Threshold at which random-selection TOP equals `eps_t`, i.e. the root of
/// `e^{-τ} + (1 - e^{-(1+γ)τ})/(1+γ) = (1 - eps_t)^{1/(2n-2)}`.
///
/// The left side falls from 1 toward `1/(1+γ)`, so no root exists when the
/// right side is at or below that limit; the result is then not binding.
/// `n = 1` has no jammers at all and is never binding.
pub fn solve_tau_random(n: u64, gamma: f64, eps_t: f64) -> Result<TauSolution> {
    const OP: &str = "solve_tau_random";
    open_unit(OP, "eps_t", eps_t)?;
    if n == 0 {
        return Err(Error::domain(OP, "n must be >= 1"));
    }
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::domain(OP, format!("gamma = {gamma} must be > 0")));
    }
    if n == 1 {
        return Ok(TauSolution {
            tau: TAU_CAP,
            top: 0.0,
            binding: false,
        });
    }
    // Required one-hop deficit 1 - (1 - eps_t)^{1/(2n-2)}.
    let needed = -((-eps_t).ln_1p() / (2 * (n - 1)) as f64).exp_m1();
    if needed >= random_hop_deficit(gamma, TAU_CAP) {
        return Ok(TauSolution {
            tau: TAU_CAP,
            top: top_random(n, gamma, TAU_CAP)?.value(),
            binding: false,
        });
    }
    // The closed form is cheap, so bisect down to float resolution unless the
    // residual criterion is met first.
    solve_increasing(|tau| top_random(n, gamma, tau).map(f64::from), eps_t, 0.0)
}

/// Largest `m` with `G(m, n, tau) ≥ sqrt(1 - eps_s)`, i.e. with
/// `SOP ≤ eps_s`.
pub fn max_tolerable(n: u64, tau: f64, gamma_e: f64, eps_s: f64) -> Result<Tolerance> {
    open_unit("max_tolerable", "eps_s", eps_s)?;
    let threshold = (1.0 - eps_s).sqrt();
    let meets =
        |m: u64| -> Result<bool> { Ok(survivor_g(m, n, tau, gamma_e)?.value() >= threshold) };

    if !meets(1)? {
        return Ok(Tolerance {
            m: 0,
            capped: false,
        });
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while meets(hi)? {
        lo = hi;
        if hi >= M_CAP {
            return Ok(Tolerance {
                m: M_CAP,
                capped: true,
            });
        }
        hi = (2 * hi).min(M_CAP);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Tolerance {
        m: lo,
        capped: false,
    })
}

/// Capability at a given threshold, skipping the threshold search.
pub fn capability_at_tau(
    scheme: Scheme,
    n: u64,
    gamma: f64,
    gamma_e: f64,
    tau: f64,
    eps_s: f64,
    cfg: &QuadratureConfig,
) -> Result<CapabilityResult> {
    let top = match scheme {
        Scheme::Opportunistic => top_opportunistic(n, gamma, tau, cfg)?,
        Scheme::Random => top_random(n, gamma, tau)?,
    };
    finish(
        scheme,
        n,
        gamma_e,
        eps_s,
        TauSolution {
            tau,
            top: top.value(),
            binding: true,
        },
    )
}

/// Optimal threshold and eavesdropper-tolerance capability.
pub fn capability(
    scheme: Scheme,
    n: u64,
    gamma: f64,
    gamma_e: f64,
    constraints: Constraints,
    cfg: &QuadratureConfig,
) -> Result<CapabilityResult> {
    constraints.require_open()?;
    let tau = match scheme {
        Scheme::Opportunistic => solve_tau_opportunistic(n, gamma, constraints.eps_t, cfg)?,
        Scheme::Random => solve_tau_random(n, gamma, constraints.eps_t)?,
    };
    finish(scheme, n, gamma_e, constraints.eps_s, tau)
}

fn finish(
    scheme: Scheme,
    n: u64,
    gamma_e: f64,
    eps_s: f64,
    tau: TauSolution,
) -> Result<CapabilityResult> {
    let tol = max_tolerable(n, tau.tau, gamma_e, eps_s)?;
    let g_at = |m: u64| -> Result<f64> { Ok(survivor_g(m, n, tau.tau, gamma_e)?.value()) };
    Ok(CapabilityResult {
        scheme,
        tau_opt: tau.tau,
        m_star: tol.m,
        top_at_tau: tau.top,
        g_at_mstar: g_at(tol.m)?,
        g_at_mstar_plus1: g_at(tol.m + 1)?,
        g_threshold: (1.0 - eps_s).sqrt(),
        tau_binding: tau.binding,
        m_capped: tol.capped,
    })
}
