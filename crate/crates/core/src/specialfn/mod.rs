//! Scalar kernels behind the closed-form outage models.
//!
//! Everything here is a pure function of its arguments in `f64`.

mod beta;
mod gamma;
mod normal;
mod quadrature;

pub use beta::{log_beta, phi_complement, phi_fn, reg_inc_beta};
pub use gamma::log_gamma;
pub use normal::{normal_cdf, normal_pdf};
pub use quadrature::{integrate_1d, try_integrate_1d, QuadratureConfig};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest excursion outside `[0, 1]` that is treated as round-off and
/// clamped. Anything beyond is reported as an error.
pub const CLAMP_SLACK: f64 = 1e-6;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::ProbabilityRange {
                op: "Probability::new",
                value,
            })
        }
    }

    /// Clamps a computed value into `[0, 1]`, tolerating excursions up to
    /// [`CLAMP_SLACK`].
    pub(crate) fn clamped(op: &'static str, value: f64) -> Result<Self> {
        if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&value) {
            return Err(Error::ProbabilityRange { op, value });
        }
        let clamped = value.clamp(0.0, 1.0);
        if clamped != value {
            log::debug!("{op}: clamped {value:e} into [0, 1]");
        }
        Ok(Probability(clamped))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
