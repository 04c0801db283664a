use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and budget for [`integrate_1d`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of leaf panels before giving up.
    pub max_panels: usize,
    /// Gauss–Legendre points per panel.
    pub panel_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_panels: 4096,
            panel_order: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("QuadratureConfig", "tolerances must be > 0"));
        }
        if self.max_panels == 0 || self.panel_order == 0 {
            return Err(Error::domain(
                "QuadratureConfig",
                "max_panels and panel_order must be >= 1",
            ));
        }
        Ok(())
    }

    /// Same budget, both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            ..*self
        }
    }
}

struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    fn new(order: usize) -> Self {
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(order, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(order, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    fn apply<F>(&self, f: &mut F, lo: f64, hi: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let x = mid + half * t;
            let fx = f(x)?;
            if !fx.is_finite() {
                return Err(Error::domain(
                    "integrate_1d",
                    format!("integrand is not finite at x = {x}"),
                ));
            }
            acc += w * fx;
        }
        Ok(acc * half)
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=order {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    if order == 0 {
        return (1.0, 0.0);
    }
    let dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(QuadratureConfig::default().panel_order))
}

struct Panel {
    lo: f64,
    hi: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// Adaptive Gauss–Legendre quadrature of `f` over `[lo, hi]`.
///
/// Each panel is compared against the sum over its two halves; the panel
/// with the largest discrepancy is bisected until the summed discrepancy is
/// within `max(abs_tol, rel_tol · |estimate|)`.
pub fn integrate_1d<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    try_integrate_1d(|x| Ok(f(x)), lo, hi, cfg)
}

/// [`integrate_1d`] for integrands that can themselves fail (for example a
/// nested integral).
pub fn try_integrate_1d<F>(mut f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::domain(
            "integrate_1d",
            format!("invalid interval [{lo}, {hi}]"),
        ));
    }
    if lo == hi {
        return Ok(0.0);
    }

    let owned;
    let rule = if cfg.panel_order == QuadratureConfig::default().panel_order {
        default_rule()
    } else {
        owned = GaussLegendre::new(cfg.panel_order);
        &owned
    };

    let whole = rule.apply(&mut f, lo, hi)?;
    let first = split(rule, &mut f, lo, hi, whole)?;
    let mut total = first.value();
    let mut total_err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= cfg.max_panels {
            return Err(Error::Quadrature {
                estimate: heap.iter().map(Panel::value).sum(),
                error_bound: heap.iter().map(|p| p.err).sum(),
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let a = split(rule, &mut f, worst.lo, mid, worst.left)?;
        let b = split(rule, &mut f, mid, worst.hi, worst.right)?;
        total += a.value() + b.value() - worst.value();
        total_err += a.err + b.err - worst.err;
        heap.push(a);
        heap.push(b);
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    Ok(panels.iter().map(Panel::value).sum())
}

fn split<F>(rule: &GaussLegendre, f: &mut F, lo: f64, hi: f64, whole: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mid = 0.5 * (lo + hi);
    let left = rule.apply(f, lo, mid)?;
    let right = rule.apply(f, mid, hi)?;
    Ok(Panel {
        lo,
        hi,
        left,
        right,
        err: (whole - left - right).abs(),
    })
}
