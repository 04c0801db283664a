use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this the argument is shifted upward by the recurrence before the
/// asymptotic series is applied.
const STIRLING_MIN: f64 = 10.0;

/// Coefficients `B_{2k} / (2k (2k-1))` of the Stirling series.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(
            "log_gamma",
            format!("x = {x} must be finite and > 0"),
        ));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x >= STIRLING_MIN {
        return Ok(stirling_base(x) + stirling_correction(x));
    }
    // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1))
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    Ok(stirling_base(shifted) + stirling_correction(shifted) - prod.ln())
}

#[inline]
fn stirling_base(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln()
}

/// `ln Γ(x) - [(x - ½) ln x - x + ½ ln 2π]`, valid for `x ≥ 10`.
pub(crate) fn stirling_correction(x: f64) -> f64 {
    debug_assert!(x >= STIRLING_MIN);
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for &c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}
