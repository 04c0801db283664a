//! CSV number formatting.

/// Significant digits of every float cell; enough to round-trip any `f64`.
pub const SIG_DIGITS: usize = 17;

/// Fixed (non-exponent) notation with [`SIG_DIGITS`] significant digits.
pub fn fixed17(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    // Take the exponent after rounding, not from log10.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}
