//! Bound tables: evaluate configured convergence bounds on a k-grid and
//! export them as CSV for plotting against recorded runs.

use crate::csvio::fmt_f64;
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use subgrad::analysis::{self, RateBound};
use subgrad::HebParams;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub output_path: String,
    /// Largest k in the table.
    pub k_max: u64,
    /// Number of (approximately log-spaced) grid points.
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(rename = "bound")]
    pub bounds: Vec<BoundSpec>,
}

fn default_points() -> usize {
    200
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundSpec {
    /// Constant-stepsize linear-phase bound.
    Fixed { name: String, alpha: f64, c: f64, theta: f64, g: f64, d1_sq: f64, d: Option<f64> },
    /// Optimal polynomial decay bound.
    OptimalDecay { name: String, c: f64, theta: f64, g: f64, omega_c: f64 },
    /// Harmonic stepsize bound under quadratic growth.
    QgHarmonic { name: String, alpha1: f64, c: f64, g: f64, d1_sq: f64 },
    /// Two-term bound under quadratic growth.
    Karimi { name: String, c: f64, g: f64, d1_sq: f64 },
    /// General polynomial-decay bound (when its constants are available).
    Decay { name: String, alpha1: f64, p: f64, c: f64, theta: f64, g: f64, d1_sq: f64, k0: Option<u64> },
}

impl BoundSpec {
    pub fn name(&self) -> &str {
        match self {
            BoundSpec::Fixed { name, .. }
            | BoundSpec::OptimalDecay { name, .. }
            | BoundSpec::QgHarmonic { name, .. }
            | BoundSpec::Karimi { name, .. }
            | BoundSpec::Decay { name, .. } => name,
        }
    }

    pub fn build(&self) -> Result<RateBound> {
        let rb = match self {
            BoundSpec::Fixed { alpha, c, theta, g, d1_sq, d, .. } => {
                analysis::fixed_bound(*alpha, &HebParams::new(*c, *theta, *g)?, *d1_sq, *d)?.rate
            }
            BoundSpec::OptimalDecay { c, theta, g, omega_c, .. } => {
                analysis::optimal_decay_bound(&HebParams::new(*c, *theta, *g)?, *omega_c)?
            }
            BoundSpec::QgHarmonic { alpha1, c, g, d1_sq, .. } => {
                analysis::qg_harmonic_bound(*alpha1, &HebParams::new(*c, 0.5, *g)?, *d1_sq)?
            }
            BoundSpec::Karimi { c, g, d1_sq, .. } => {
                analysis::karimi_bound(&HebParams::new(*c, 0.5, *g)?, *d1_sq)?
            }
            BoundSpec::Decay { alpha1, p, c, theta, g, d1_sq, k0, .. } => {
                let report =
                    analysis::decay_constants(*alpha1, *p, &HebParams::new(*c, *theta, *g)?, Some(*d1_sq), *k0);
                report.rate.context("decay bound not derivable from the given parameters")?
            }
        };
        Ok(rb)
    }
}

pub fn load(path: &Path) -> Result<BoundsConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read bounds config {}", path.display()))?;
    let cfg: BoundsConfig = toml::from_str(&text).context("bounds config parse error")?;
    Ok(cfg)
}

/// Write the table: column `k`, then one column per configured bound, empty
/// before that bound's validity range. Returns the output path.
pub fn run(cfg: &BoundsConfig) -> Result<PathBuf> {
    let bounds: Vec<(String, RateBound)> = cfg
        .bounds
        .iter()
        .map(|spec| Ok((spec.name().to_string(), spec.build()?)))
        .collect::<Result<_>>()?;
    let grid = log_grid(cfg.k_max, cfg.points);
    let mut out = String::new();
    out.push('k');
    for (name, _) in &bounds {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for &k in &grid {
        out.push_str(&k.to_string());
        for (_, rb) in &bounds {
            out.push(',');
            if k >= rb.k_start {
                out.push_str(&fmt_f64(rb.bound(k)));
            }
        }
        out.push('\n');
    }
    let path = PathBuf::from(&cfg.output_path);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(&path, out)?;
    Ok(path)
}

fn log_grid(k_max: u64, points: usize) -> Vec<u64> {
    let mut grid = Vec::with_capacity(points);
    let lmax = (k_max as f64).ln();
    for i in 0..points {
        let k = (lmax * i as f64 / (points.max(2) - 1) as f64).exp().round() as u64;
        grid.push(k.clamp(1, k_max));
    }
    grid.dedup();
    grid
}
