//! Grid sweeps driven by a JSON spec.
//!
//! A spec maps flag names to a scalar, a list, or an inclusive
//! `{"start", "stop", "step"}` range:
//!
//! ```json
//! {
//!   "scheme": "opportunistic",
//!   "n": {"start": 30, "stop": 80, "step": 10},
//!   "tau": [0.05, 0.075, 0.1],
//!   "gamma": 10,
//!   "outputs": ["top", "mc"],
//!   "trials": 100000,
//!   "seed": 1
//! }
//! ```
//!
//! Rows enumerate the cartesian product in the fixed axis order
//! `scheme, n, m, tau, gamma, gamma-e, eps-t, eps-s`, last axis fastest.
//! Every Monte-Carlo cell uses the spec seed, so a grid point's estimate does
//! not depend on which other points share the sweep.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use jamtol_core::analytic::sop;
use jamtol_core::capability::{capability, capability_at_tau};
use jamtol_core::channel::rate_to_threshold;
use jamtol_core::montecarlo::estimate;
use jamtol_core::{Constraints, NetworkConfig, QuadratureConfig, Scheme, SimJob};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{DEFAULT_GAMMA, DEFAULT_GAMMA_E, DEFAULT_TRIALS};
use crate::commands::analytic_top;
use crate::format::fixed17;
use crate::CliError;

/// Upper bound on grid size, to catch runaway ranges.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// Values of one parameter.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Scalar(f64),
    List(Vec<f64>),
    Range(RangeSpec),
}

impl Axis {
    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let values = match self {
            Axis::Scalar(v) => vec![*v],
            Axis::List(vs) => vs.clone(),
            Axis::Range(r) => {
                if !(r.step > 0.0 && r.step.is_finite() && r.start.is_finite() && r.stop >= r.start)
                {
                    return Err(spec_err(format!(
                        "{name}: range needs finite start <= stop and step > 0"
                    )));
                }
                let span = (r.stop - r.start) / r.step;
                if span >= MAX_POINTS as f64 {
                    return Err(spec_err(format!("{name}: range has too many points")));
                }
                let count = (span + 1e-9).floor() as usize + 1;
                (0..count).map(|k| r.start + k as f64 * r.step).collect()
            }
        };
        if values.is_empty() {
            return Err(spec_err(format!("{name}: empty axis")));
        }
        Ok(values)
    }

    fn counts(&self, name: &str) -> Result<Vec<u64>, CliError> {
        self.values(name)?
            .into_iter()
            .map(|v| {
                if v >= 0.0 && v.fract() == 0.0 && v <= 2f64.powi(53) {
                    Ok(v as u64)
                } else {
                    Err(spec_err(format!(
                        "{name}: {v} is not a non-negative integer"
                    )))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SchemeAxis {
    One(Scheme),
    Many(Vec<Scheme>),
}

/// Quantities a sweep can report per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    /// Analytic transmission outage.
    Top,
    /// Analytic secrecy outage.
    Sop,
    /// Monte-Carlo estimates of both outages.
    #[serde(alias = "simulate")]
    Mc,
    /// Optimal threshold and eavesdropper tolerance.
    Capability,
}

impl Output {
    fn columns(self) -> &'static [&'static str] {
        match self {
            Output::Top => &["top"],
            Output::Sop => &["sop"],
            Output::Mc => &["mc_top", "mc_top_stderr", "mc_sop", "mc_sop_stderr"],
            Output::Capability => &[
                "tau_opt",
                "m_star",
                "top_at_tau",
                "g_at_mstar",
                "g_at_mstar_plus1",
                "tau_binding",
                "m_capped",
            ],
        }
    }
}

/// Parsed sweep file. Keys mirror the command-line flags; `gamma_e`-style
/// spellings are accepted as well.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub scheme: Option<SchemeAxis>,
    pub n: Option<Axis>,
    pub m: Option<Axis>,
    pub tau: Option<Axis>,
    pub gamma: Option<Axis>,
    #[serde(rename = "gamma-e", alias = "gamma_e")]
    pub gamma_e: Option<Axis>,
    pub rate: Option<Axis>,
    #[serde(rename = "rate-e", alias = "rate_e")]
    pub rate_e: Option<Axis>,
    #[serde(rename = "eps-t", alias = "eps_t")]
    pub eps_t: Option<Axis>,
    #[serde(rename = "eps-s", alias = "eps_s")]
    pub eps_s: Option<Axis>,
    pub outputs: Vec<Output>,
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| spec_err(e.to_string()))
    }
}

/// A threshold value together with the rate it was derived from, if any.
type Threshold = (f64, Option<f64>);

/// Validated, fully expanded sweep.
#[derive(Debug, Clone)]
pub struct Plan {
    schemes: Vec<Scheme>,
    ns: Vec<u64>,
    ms: Vec<u64>,
    taus: Vec<Option<f64>>,
    gammas: Vec<Threshold>,
    gamma_es: Vec<Threshold>,
    eps_ts: Vec<Option<f64>>,
    eps_ss: Vec<Option<f64>>,
    has_rate: bool,
    has_rate_e: bool,
    pub outputs: Vec<Output>,
    pub trials: Option<u64>,
    pub seed: u64,
}

/// One grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub scheme: Scheme,
    pub n: u64,
    pub m: u64,
    pub tau: Option<f64>,
    pub gamma: Threshold,
    pub gamma_e: Threshold,
    pub eps_t: Option<f64>,
    pub eps_s: Option<f64>,
}

fn thresholds(
    direct: &Option<Axis>,
    rate: &Option<Axis>,
    name: &str,
    default: f64,
) -> Result<Vec<Threshold>, CliError> {
    match (direct, rate) {
        (Some(_), Some(_)) => Err(spec_err(format!("{name} and its rate are both given"))),
        (Some(a), None) => Ok(a.values(name)?.into_iter().map(|g| (g, None)).collect()),
        (None, Some(r)) => r
            .values(name)?
            .into_iter()
            .map(|r| Ok((rate_to_threshold(r)?, Some(r))))
            .collect(),
        (None, None) => Ok(vec![(default, None)]),
    }
}

fn optional(axis: &Option<Axis>, name: &str) -> Result<Vec<Option<f64>>, CliError> {
    match axis {
        Some(a) => Ok(a.values(name)?.into_iter().map(Some).collect()),
        None => Ok(vec![None]),
    }
}

impl Plan {
    pub fn new(spec: &SweepSpec) -> Result<Self, CliError> {
        let mut outputs = spec.outputs.clone();
        outputs.sort();
        outputs.dedup();
        if outputs.is_empty() {
            return Err(spec_err("outputs: at least one output is required"));
        }
        let n = spec
            .n
            .as_ref()
            .ok_or_else(|| spec_err("n: axis is required"))?;
        let needs_tau = outputs.iter().any(|o| *o != Output::Capability);
        if needs_tau && spec.tau.is_none() {
            return Err(spec_err("tau: axis is required for top, sop and mc"));
        }
        if outputs.contains(&Output::Capability) {
            if spec.eps_s.is_none() {
                return Err(spec_err("eps-s: axis is required for capability"));
            }
            if spec.eps_t.is_none() && spec.tau.is_none() {
                return Err(spec_err("capability needs either eps-t or a fixed tau"));
            }
        }
        let trials = if outputs.contains(&Output::Mc) {
            let t = spec.trials.unwrap_or(DEFAULT_TRIALS);
            if t == 0 {
                return Err(spec_err("trials: must be >= 1"));
            }
            Some(t)
        } else {
            None
        };
        let schemes = match &spec.scheme {
            None => vec![Scheme::Opportunistic],
            Some(SchemeAxis::One(s)) => vec![*s],
            Some(SchemeAxis::Many(v)) if v.is_empty() => {
                return Err(spec_err("scheme: empty axis"))
            }
            Some(SchemeAxis::Many(v)) => v.clone(),
        };
        let plan = Plan {
            schemes,
            ns: n.counts("n")?,
            ms: match &spec.m {
                Some(a) => a.counts("m")?,
                None => vec![0],
            },
            taus: optional(&spec.tau, "tau")?,
            gammas: thresholds(&spec.gamma, &spec.rate, "gamma", DEFAULT_GAMMA)?,
            gamma_es: thresholds(&spec.gamma_e, &spec.rate_e, "gamma-e", DEFAULT_GAMMA_E)?,
            eps_ts: optional(&spec.eps_t, "eps-t")?,
            eps_ss: optional(&spec.eps_s, "eps-s")?,
            has_rate: spec.rate.is_some(),
            has_rate_e: spec.rate_e.is_some(),
            outputs,
            trials,
            seed: spec.seed,
        };
        let total = [
            plan.schemes.len(),
            plan.ns.len(),
            plan.ms.len(),
            plan.taus.len(),
            plan.gammas.len(),
            plan.gamma_es.len(),
            plan.eps_ts.len(),
            plan.eps_ss.len(),
        ]
        .iter()
        .try_fold(1usize, |acc, &k| {
            acc.checked_mul(k).filter(|&t| t <= MAX_POINTS)
        });
        if total.is_none() {
            return Err(spec_err(format!("grid exceeds {MAX_POINTS} points")));
        }
        Ok(plan)
    }

    /// Grid points in row order.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for &scheme in &self.schemes {
            for &n in &self.ns {
                for &m in &self.ms {
                    for &tau in &self.taus {
                        for &gamma in &self.gammas {
                            for &gamma_e in &self.gamma_es {
                                for &eps_t in &self.eps_ts {
                                    for &eps_s in &self.eps_ss {
                                        out.push(Point {
                                            scheme,
                                            n,
                                            m,
                                            tau,
                                            gamma,
                                            gamma_e,
                                            eps_t,
                                            eps_s,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn columns(&self) -> Vec<&'static str> {
        let mut cols = vec!["scheme", "n", "m", "tau", "gamma"];
        if self.has_rate {
            cols.push("rate");
        }
        cols.push("gamma_e");
        if self.has_rate_e {
            cols.push("rate_e");
        }
        cols.extend(["eps_t", "eps_s"]);
        for o in &self.outputs {
            cols.extend_from_slice(o.columns());
        }
        cols.push("error");
        cols
    }

    fn input_cells(&self, p: &Point) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(fixed17).unwrap_or_default();
        let mut cells = vec![
            p.scheme.to_string(),
            p.n.to_string(),
            p.m.to_string(),
            opt(p.tau),
            fixed17(p.gamma.0),
        ];
        if self.has_rate {
            cells.push(opt(p.gamma.1));
        }
        cells.push(fixed17(p.gamma_e.0));
        if self.has_rate_e {
            cells.push(opt(p.gamma_e.1));
        }
        cells.extend([opt(p.eps_t), opt(p.eps_s)]);
        cells
    }

    fn output_cells(&self, p: &Point, out: Output) -> Result<Vec<String>, CliError> {
        let tau = || p.tau.ok_or_else(|| spec_err("tau missing"));
        let cells = match out {
            Output::Top => vec![fixed17(
                analytic_top(p.scheme, p.n, p.gamma.0, tau()?)?.value(),
            )],
            Output::Sop => vec![fixed17(sop(p.n, p.m, tau()?, p.gamma_e.0)?.value())],
            Output::Mc => {
                let job = SimJob {
                    config: NetworkConfig::new(p.n, p.m, p.gamma.0, p.gamma_e.0, tau()?)?,
                    scheme: p.scheme,
                    trials: self.trials.unwrap_or(DEFAULT_TRIALS),
                    master_seed: self.seed,
                };
                let (t, s) = estimate(&job)?;
                [t.p_hat, t.stderr, s.p_hat, s.stderr].map(fixed17).to_vec()
            }
            Output::Capability => {
                let cfg = QuadratureConfig::default();
                let eps_s = p.eps_s.ok_or_else(|| spec_err("eps-s missing"))?;
                let r = match p.eps_t {
                    Some(eps_t) => capability(
                        p.scheme,
                        p.n,
                        p.gamma.0,
                        p.gamma_e.0,
                        Constraints::new(eps_t, eps_s)?,
                        &cfg,
                    )?,
                    None => capability_at_tau(
                        p.scheme,
                        p.n,
                        p.gamma.0,
                        p.gamma_e.0,
                        tau()?,
                        eps_s,
                        &cfg,
                    )?,
                };
                vec![
                    fixed17(r.tau_opt),
                    r.m_star.to_string(),
                    fixed17(r.top_at_tau),
                    fixed17(r.g_at_mstar),
                    fixed17(r.g_at_mstar_plus1),
                    r.tau_binding.to_string(),
                    r.m_capped.to_string(),
                ]
            }
        };
        Ok(cells)
    }

    /// Evaluates one point; failing outputs leave their cells empty and add
    /// a message to the error column.
    pub fn evaluate(&self, p: &Point) -> Row {
        let mut cells = self.input_cells(p);
        let mut errors = Vec::new();
        for &o in &self.outputs {
            match self.output_cells(p, o) {
                Ok(c) => cells.extend(c),
                Err(e) => {
                    cells.extend(std::iter::repeat(String::new()).take(o.columns().len()));
                    errors.push(format!(
                        "{}: {e}",
                        serde_json::to_value(o).unwrap().as_str().unwrap()
                    ));
                }
            }
        }
        let error = (!errors.is_empty()).then(|| errors.join("; "));
        cells.push(error.clone().unwrap_or_default());
        Row { cells, error }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<String>,
    pub error: Option<String>,
}

/// Evaluates every point concurrently; the result is in row order.
pub fn evaluate_all(plan: &Plan) -> Vec<Row> {
    plan.points().par_iter().map(|p| plan.evaluate(p)).collect()
}

pub fn write_csv<W: Write>(w: W, plan: &Plan, rows: &[Row]) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(plan.columns())?;
    for r in rows {
        csv.write_record(&r.cells)?;
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct RowFailure {
    pub row: usize,
    pub error: String,
}

/// Provenance written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub spec_file: String,
    pub spec_sha256: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub outputs: Vec<Output>,
    pub csv: String,
    pub columns: Vec<&'static str>,
    pub rows: usize,
    pub failed_rows: usize,
    pub failures: Vec<RowFailure>,
}

/// What the `sweep` command prints.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub command: &'static str,
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub rows: usize,
    pub failed_rows: usize,
}

/// `foo.csv` → `foo.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn run_sweep(spec_path: &Path, out: &Path) -> Result<SweepSummary, CliError> {
    let bytes = fs::read(spec_path).map_err(|e| CliError::io(spec_path, e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| spec_err(e.to_string()))?;
    let plan = Plan::new(&SweepSpec::from_json(text)?)?;
    let rows = evaluate_all(&plan);

    let mut buf = Vec::new();
    write_csv(&mut buf, &plan, &rows)?;
    fs::write(out, &buf).map_err(|e| CliError::io(out, e))?;

    let failures: Vec<RowFailure> = rows
        .iter()
        .enumerate()
        .filter_map(|(row, r)| r.error.clone().map(|error| RowFailure { row, error }))
        .collect();
    let manifest = Manifest {
        tool: "jamtol",
        version: env!("CARGO_PKG_VERSION"),
        spec_file: file_name(spec_path),
        spec_sha256: hex::encode(Sha256::digest(&bytes)),
        seed: plan.seed,
        trials: plan.trials,
        outputs: plan.outputs.clone(),
        csv: file_name(out),
        columns: plan.columns(),
        rows: rows.len(),
        failed_rows: failures.len(),
        failures,
    };
    let mpath = manifest_path(out);
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(&mpath, json).map_err(|e| CliError::io(&mpath, e))?;

    Ok(SweepSummary {
        command: "sweep",
        csv: out.to_path_buf(),
        manifest: mpath,
        rows: manifest.rows,
        failed_rows: manifest.failed_rows,
    })
}

fn spec_err(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}
