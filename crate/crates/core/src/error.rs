use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// Adaptive quadrature hit its panel budget before meeting tolerance.
    #[error(
        "quadrature did not converge after {panels} panels \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    Quadrature {
        estimate: f64,
        error_bound: f64,
        panels: usize,
    },

    /// A computed probability fell outside [0, 1] by more than round-off.
    #[error("{op}: probability {value:e} outside [0, 1]")]
    ProbabilityRange { op: &'static str, value: f64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
