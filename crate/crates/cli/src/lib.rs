//! Command implementations behind the `jamtol` executable.
//!
//! Single-point commands ([`commands`]) return serializable records; the
//! binary prints them as one JSON line. Sweeps ([`sweep`]) expand a JSON
//! grid spec, evaluate the points in parallel and write a CSV plus a
//! manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;

pub mod args;
pub mod commands;
pub mod format;
pub mod sweep;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] jamtol_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid sweep spec: {0}")]
    Spec(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(jamtol_core::Error::Quadrature { .. }) => "quadrature",
            CliError::Core(jamtol_core::Error::ProbabilityRange { .. }) => "probability_range",
            CliError::Core(jamtol_core::Error::Domain { .. }) => "domain",
            CliError::Io { .. } => "io",
            CliError::Spec(_) => "spec",
            CliError::Usage(_) => "usage",
            CliError::Csv(_) => "csv",
            CliError::Json(_) => "json",
        }
    }

    /// Machine-readable failure report for `command`.
    pub fn diagnostic(&self, command: &'static str) -> Diagnostic {
        let (estimate, error_bound, panels) = match self {
            CliError::Core(jamtol_core::Error::Quadrature {
                estimate,
                error_bound,
                panels,
            }) => (Some(*estimate), Some(*error_bound), Some(*panels)),
            _ => (None, None, None),
        };
        Diagnostic {
            command,
            error: DiagnosticBody {
                kind: self.kind(),
                message: self.to_string(),
                estimate,
                error_bound,
                panels,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub command: &'static str,
    pub error: DiagnosticBody,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticBody {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub panels: Option<usize>,
}
