//! Closed-form transmission and secrecy outage probabilities.
//!
//! The opportunistic-relaying TOP replaces the exact interference law by a
//! normal density matched in mean and variance, so it is an approximation
//! that tightens as `n` grows. The random-selection TOP and both SOP
//! expressions are exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specialfn::{
    log_gamma, normal_cdf, normal_pdf, phi_complement, try_integrate_1d, Probability,
    QuadratureConfig,
};

/// Half-width of the integration window around the interference mean, in
/// standard deviations.
const WINDOW_SIGMAS: f64 = 10.0;

/// Normal approximation of the interference `I₁` (equivalently `I₂`) at a
/// legitimate receiver.
///
/// `I₁` sums the `n - 1` non-selected relay gains that fall below `tau`.
/// The exact law has an atom of mass `e^{-(n-1)τ}` at zero and support
/// `[0, (n-1)τ]`; `atom_mass` and `support_hi` are carried for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalApprox {
    pub mu: f64,
    pub sigma: f64,
    pub support_hi: f64,
    pub atom_mass: f64,
}

/// Mean and variance of one truncated gain `U = X·1{X < τ}`, `X ~ Exp(1)`.
///
/// Closed forms are `1 - (1+τ)e^{-τ}` and `1 - τ²e^{-τ} - (1+τ)²e^{-2τ}`.
/// Both cancel badly for small `τ`, where the raw moments are summed from
/// their Taylor series instead.
fn truncated_gain_moments(tau: f64) -> (f64, f64) {
    if tau < 1.0 {
        // E[U^p] = ∫₀^τ x^p e^{-x} dx = Σ_j (-1)^j τ^{j+p+1} / (j! (j+p+1))
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut pow = tau * tau; // τ^{j+2} / j!
        for j in 0..60 {
            let jf = j as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let t1 = sign * pow / (jf + 2.0);
            let t2 = sign * pow * tau / (jf + 3.0);
            m1 += t1;
            m2 += t2;
            if t1.abs() < 1e-18 * m1.abs() && t2.abs() < 1e-18 * m2.abs() {
                break;
            }
            pow *= tau / (jf + 1.0);
        }
        (m1, (m2 - m1 * m1).max(0.0))
    } else {
        let e = (-tau).exp();
        let mean = 1.0 - (1.0 + tau) * e;
        let var = 1.0 - tau * tau * e - (1.0 + tau) * (1.0 + tau) * e * e;
        (mean, var.max(0.0))
    }
}

/// Normal approximation of the per-phase interference.
///
/// `n = 1` (no candidate jammers) and `tau = 0` both give a point mass at
/// zero: `mu = sigma = 0`.
pub fn interference_approx(n: u64, tau: f64) -> Result<NormalApprox> {
    if n == 0 {
        return Err(Error::domain("interference_approx", "n must be >= 1"));
    }
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::domain(
            "interference_approx",
            format!("tau = {tau} must be >= 0"),
        ));
    }
    let k = (n - 1) as f64;
    let (m1, v1) = truncated_gain_moments(tau);
    Ok(NormalApprox {
        mu: k * m1,
        sigma: (k * v1).sqrt(),
        support_hi: k * tau,
        atom_mass: (-k * tau).exp(),
    })
}

impl NormalApprox {
    /// Integration window: the ±10σ band clipped to the exact support.
    pub fn window(&self) -> (f64, f64) {
        let lo = (self.mu - WINDOW_SIGMAS * self.sigma).max(0.0);
        let hi = (self.mu + WINDOW_SIGMAS * self.sigma).min(self.support_hi);
        (lo, hi.max(lo))
    }

    #[inline]
    pub fn density(&self, x: f64) -> f64 {
        normal_pdf(x, self.mu, self.sigma)
    }

    /// Approximate probability mass in `[lo, x]`.
    #[inline]
    pub fn mass_between(&self, lo: f64, x: f64) -> f64 {
        normal_cdf((x - self.mu) / self.sigma) - normal_cdf((lo - self.mu) / self.sigma)
    }
}

fn check_nonneg(op: &'static str, name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::domain(
            op,
            format!("{name} = {v} must be finite and >= 0"),
        ));
    }
    Ok(())
}

fn check_pos(op: &'static str, name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::domain(
            op,
            format!("{name} = {v} must be finite and > 0"),
        ));
    }
    Ok(())
}

/// `(1 - e^{-2s})^n`: probability that every relay's bottleneck gain is
/// below `s`.
#[inline]
fn all_bottlenecks_below(n: f64, s: f64) -> f64 {
    (n * (-(-2.0 * s).exp()).ln_1p()).exp()
}

/// `1 - (1 - e^{-2s})^n`, accurate when the power is close to 1.
#[inline]
fn some_bottleneck_above(n: f64, s: f64) -> f64 {
    -(n * (-(-2.0 * s).exp()).ln_1p()).exp_m1()
}

/// Joint tail `P(|h_{S,R_b}|² ≥ x, |h_{R_b,D}|² ≥ y)` of the selected relay's
/// two hop gains under opportunistic selection among `n` relays.
///
/// With `M = max(x, y)` and `m = min(x, y)` this is
/// `1 - (1 - e^{-2M})^n + n e^{-M} [φ(n, m) - φ(n, M)]`.
pub fn joint_best_tail(n: u64, x: f64, y: f64) -> Result<Probability> {
    const OP: &str = "joint_best_tail";
    if n == 0 {
        return Err(Error::domain(OP, "n must be >= 1"));
    }
    check_nonneg(OP, "x", x)?;
    check_nonneg(OP, "y", y)?;
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let nf = n as f64;
    // φ(n, lo) - φ(n, hi) = ψ(n, hi) - ψ(n, lo)
    let gap = phi_complement(n, hi)? - phi_complement(n, lo)?;
    let v = some_bottleneck_above(nf, hi) + nf * (-hi).exp() * gap;
    Probability::clamped(OP, v)
}

/// Transmission outage probability under opportunistic relaying.
///
/// Evaluates
/// `2 ∫∫_{y ≤ x} [1 - P(h_S ≥ γx, h_D ≥ γy)] f̂(x) f̂(y) dy dx`
/// over the integration window of [`NormalApprox::window`], where `f̂` is
/// the normal interference density. The integrand is expanded as
/// `g(n,γ,x) - n e^{-γx} φ(n,γy)`, the form with the `Φ` factor after the
/// inner integration of the first part, but grouped so the two large `φ`
/// contributions cancel analytically. `f̂` is not renormalized over the window.
pub fn top_opportunistic(
    n: u64,
    gamma: f64,
    tau: f64,
    cfg: &QuadratureConfig,
) -> Result<Probability> {
    const OP: &str = "top_opportunistic";
    if n == 0 {
        return Err(Error::domain(OP, "n must be >= 1"));
    }
    check_pos(OP, "gamma", gamma)?;
    check_nonneg(OP, "tau", tau)?;
    if tau == 0.0 || n == 1 {
        return Ok(Probability::ZERO);
    }
    let approx = interference_approx(n, tau)?;
    if approx.sigma == 0.0 {
        return Ok(Probability::ZERO);
    }
    let (lo, hi) = approx.window();
    let inner_cfg = cfg.tightened(10.0);
    let nf = n as f64;

    let outer = |x: f64| -> Result<f64> {
        let fx = approx.density(x);
        if fx == 0.0 {
            return Ok(0.0);
        }
        let gx = gamma * x;
        let psi_x = phi_complement(n, gx)?;
        let first = all_bottlenecks_below(nf, gx) * approx.mass_between(lo, x);
        let gap = try_integrate_1d(
            |y| Ok((psi_x - phi_complement(n, gamma * y)?) * approx.density(y)),
            lo,
            x,
            &inner_cfg,
        )?;
        Ok(fx * (first - nf * (-gx).exp() * gap))
    };
    let value = 2.0 * try_integrate_1d(outer, lo, hi, cfg)?;
    Probability::clamped(OP, value)
}

/// `G(m, n, τ) = E[(1 - c^L)^m]` with `L ~ Binomial(n-1, 1-e^{-τ})` and
/// `c = 1/(1+γe)`: the probability that none of `m` eavesdroppers decodes
/// one phase.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct SurvivorG {
    value: f64,
}

impl SurvivorG {
    #[inline]
    pub fn value(self) -> f64 {
        self.value
    }
}

/// Evaluates [`SurvivorG`] as a direct expectation over the jammer count.
///
/// The binomial weights are formed in log space and renormalized, and
/// `(1 - c^L)^m` is computed as `exp(m · ln(1 - c^L))`, so every term is
/// nonnegative and the sum stays accurate for `m` far beyond the range where
/// the alternating expansion in `k` is usable.
pub fn survivor_g(m: u64, n: u64, tau: f64, gamma_e: f64) -> Result<SurvivorG> {
    const OP: &str = "survivor_g";
    if n == 0 {
        return Err(Error::domain(OP, "n must be >= 1"));
    }
    check_nonneg(OP, "tau", tau)?;
    check_pos(OP, "gamma_e", gamma_e)?;
    if m == 0 {
        return Ok(SurvivorG { value: 1.0 });
    }
    if tau == 0.0 || n == 1 {
        // L = 0 surely: no jammers, every eavesdropper decodes.
        return Ok(SurvivorG { value: 0.0 });
    }

    let trials = n - 1;
    let tf = trials as f64;
    let ln_p = (-(-tau).exp_m1()).ln();
    let ln_q = -tau;
    let ln_c = -gamma_e.ln_1p();
    let mf = m as f64;
    let ln_n_fact = log_gamma(tf + 1.0)?;

    let mut log_w = Vec::with_capacity(trials as usize + 1);
    for l in 0..=trials {
        let lf = l as f64;
        let ln_choose = ln_n_fact - log_gamma(lf + 1.0)? - log_gamma(tf - lf + 1.0)?;
        log_w.push(ln_choose + lf * ln_p + (tf - lf) * ln_q);
    }
    let peak = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut norm = 0.0;
    let mut acc = 0.0;
    for (l, &lw) in log_w.iter().enumerate() {
        let w = (lw - peak).exp();
        if w == 0.0 {
            continue;
        }
        norm += w;
        if l == 0 {
            continue;
        }
        // ln(1 - c^L) = ln(-expm1(L ln c))
        let ln_miss = (-(l as f64 * ln_c).exp_m1()).ln();
        acc += w * (mf * ln_miss).exp();
    }
    let value = (acc / norm).clamp(0.0, 1.0);
    Ok(SurvivorG { value })
}

/// Secrecy outage probability `1 - G²`, shared by both relay selection
/// schemes.
///
/// Exact for random selection. Under opportunistic selection the relays left
/// out of the max-min choice are slightly more likely to fall below `tau`
/// toward D, so the true value is somewhat lower at small `n` and large
/// `tau`.
pub fn sop(n: u64, m: u64, tau: f64, gamma_e: f64) -> Result<Probability> {
    let g = survivor_g(m, n, tau, gamma_e)?.value();
    Probability::clamped("sop", (1.0 - g) * (1.0 + g))
}

/// `1 - [e^{-τ} + (1 - e^{-(1+γ)τ})/(1+γ)]`: probability that one hop of a
/// randomly selected relay fails against a single candidate jammer.
///
/// Small `(1+γ)τ` uses the series `Σ_{k≥2} (-1)^k τ^k ((1+γ)^{k-1} - 1) / k!`.
pub(crate) fn random_hop_deficit(gamma: f64, tau: f64) -> f64 {
    let a = 1.0 + gamma;
    if a * tau < 0.1 {
        let mut sum = 0.0;
        let mut tk = tau; // τ^k / k!
        let mut ak = 1.0; // a^{k-1}
        for k in 2..40 {
            tk *= tau / k as f64;
            ak *= a;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * tk * (ak - 1.0);
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        -(-tau).exp_m1() + (-a * tau).exp_m1() / a
    }
}

/// Transmission outage probability under random relay selection (exact).
pub fn top_random(n: u64, gamma: f64, tau: f64) -> Result<Probability> {
    const OP: &str = "top_random";
    if n == 0 {
        return Err(Error::domain(OP, "n must be >= 1"));
    }
    check_pos(OP, "gamma", gamma)?;
    check_nonneg(OP, "tau", tau)?;
    let exponent = 2.0 * (n - 1) as f64;
    let d = random_hop_deficit(gamma, tau);
    Probability::clamped(OP, -(exponent * (-d).ln_1p()).exp_m1())
}
