//! Experiment configuration: a plain TOML file with one `[problem]` table,
//! an optional `[reference]` table, top-level scalars, and one `[[entry]]`
//! per solver under comparison. See the repository README for the field
//! reference.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use subgrad::schedules::StepsizeSchedule;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Subgradient-evaluation budget per entry; traces are truncated to it.
    pub budget: u64,
    /// Output directory for traces, summary, and plots.
    pub output_dir: String,
    /// Seed for the shared initial point (projected standard-normal draw).
    #[serde(default = "default_init_seed")]
    pub init_seed: u64,
    pub problem: ProblemSpec,
    #[serde(default)]
    pub reference: ReferencePolicy,
    #[serde(default)]
    pub plot: PlotSpec,
    #[serde(rename = "entry", default)]
    pub entries: Vec<EntrySpec>,
}

fn default_init_seed() -> u64 {
    0xA11CE
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// Random least-absolute-deviations regression over an l1 ball.
    Lad { m: usize, n: usize, tau: f64, seed: u64 },
    /// Random hinge-loss SVM over an l1 ball.
    Svm { m: usize, n: usize, tau: f64, seed: u64 },
    /// Power-growth objective `c ||x||^{1/theta}` on a Euclidean ball.
    Power { c: f64, theta: f64, dim: usize, radius: f64 },
    /// `||x||_1` on a box.
    L1Box { dim: usize, half_width: f64 },
    /// Least absolute deviations on a sparse-format dataset file.
    DatasetLad { path: String, tau: f64, m_limit: Option<usize> },
    /// Hinge-loss SVM on a sparse-format dataset file.
    DatasetSvm { path: String, tau: f64, m_limit: Option<usize>, grouping: GroupingSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupingSpec {
    None,
    GlassScale,
}

/// How the reference optimum used for the `gap` column is obtained.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReferencePolicy {
    /// No reference; the gap column stays empty.
    #[default]
    None,
    /// Run the adaptive staircase scheme to numerical precision and cache
    /// the best objective per (problem, seed).
    AdaptiveStairs { eps: f64, eval_cap: u64 },
    /// Use a known optimal value.
    Value { value: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotSpec {
    /// y axis: objective gap or squared distance.
    #[serde(default)]
    pub y: PlotY,
    /// x axis: cumulative evaluations or iteration index.
    #[serde(default)]
    pub x: PlotX,
    /// Logarithmic x axis (log-log rendering).
    #[serde(default)]
    pub log_x: bool,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec { y: PlotY::Gap, x: PlotX::Evals, log_x: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PlotY {
    #[default]
    Gap,
    DistSq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PlotX {
    #[default]
    Evals,
    K,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EntrySpec {
    /// Plain schedule-driven run for the full budget.
    Schedule { name: String, schedule: StepsizeSchedule },
    /// Descending-stairs run with a claimed growth constant.
    DsSg {
        name: String,
        c: f64,
        beta: f64,
        eps: f64,
        /// Defaults to `4 tau^2` for ball-constrained problems.
        omega1: Option<f64>,
        /// Keep adding stairs past the configured target until the shared
        /// evaluation budget is spent (each extra stair tightens the
        /// tolerance). Default: stop at the configured target.
        extend_to_budget: Option<bool>,
    },
    /// Doubling-trick run; `c1` defaults to the estimated norm bound `G`
    /// (the choice used throughout the benchmark experiments).
    Ds2Sg {
        name: String,
        beta: f64,
        eps: f64,
        c1: Option<f64>,
        omega_c: Option<f64>,
        /// Outer-loop cap; when absent the run stops once the evaluation
        /// budget is spent.
        max_outer: Option<u32>,
    },
    /// Restarted averaged subgradient baseline sized from a claimed growth
    /// constant.
    Rsg { name: String, c: f64, beta: f64, eps: f64 },
    /// Adaptive restart baseline driven by a surrogate exponent below 1.
    R2Sg {
        name: String,
        theta_hat: f64,
        stage_len: Option<u64>,
        stages: Option<u32>,
        alpha1: Option<f64>,
    },
    /// Geometrically decaying stepsize for sharp problems, sized from a
    /// claimed growth constant.
    Shor { name: String, c: f64, d1_bound: Option<f64> },
}

impl EntrySpec {
    pub fn name(&self) -> &str {
        match self {
            EntrySpec::Schedule { name, .. }
            | EntrySpec::DsSg { name, .. }
            | EntrySpec::Ds2Sg { name, .. }
            | EntrySpec::Rsg { name, .. }
            | EntrySpec::R2Sg { name, .. }
            | EntrySpec::Shor { name, .. } => name,
        }
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).context("config parse error")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            bail!("field `budget`: must be positive");
        }
        if self.entries.is_empty() {
            bail!("field `entry`: at least one entry is required");
        }
        let mut names: Vec<&str> = self.entries.iter().map(|e| e.name()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.entries.len() {
            bail!("field `entry.name`: entry names must be unique");
        }
        match &self.problem {
            ProblemSpec::Lad { m, n, tau, .. } | ProblemSpec::Svm { m, n, tau, .. } => {
                if *m == 0 || *n == 0 {
                    bail!("fields `problem.m`/`problem.n`: must be positive");
                }
                if !(*tau > 0.0) {
                    bail!("field `problem.tau`: must be positive");
                }
            }
            ProblemSpec::Power { c, theta, dim, radius } => {
                if !(*c > 0.0 && *theta > 0.0 && *theta <= 1.0 && *dim > 0 && *radius > 0.0) {
                    bail!("fields `problem.c`/`problem.theta`/`problem.dim`/`problem.radius`: out of range");
                }
            }
            ProblemSpec::L1Box { dim, half_width } => {
                if !(*dim > 0 && *half_width > 0.0) {
                    bail!("fields `problem.dim`/`problem.half_width`: out of range");
                }
            }
            ProblemSpec::DatasetLad { tau, .. } | ProblemSpec::DatasetSvm { tau, .. } => {
                if !(*tau > 0.0) {
                    bail!("field `problem.tau`: must be positive");
                }
            }
        }
        for entry in &self.entries {
            match entry {
                EntrySpec::DsSg { name, c, beta, eps, .. } | EntrySpec::Rsg { name, c, beta, eps } => {
                    if !(*c > 0.0) {
                        bail!("entry `{name}`, field `c`: must be positive");
                    }
                    if !(*beta > 1.0) {
                        bail!("entry `{name}`, field `beta`: must exceed 1");
                    }
                    if !(*eps > 0.0) {
                        bail!("entry `{name}`, field `eps`: must be positive");
                    }
                }
                EntrySpec::Ds2Sg { name, beta, eps, .. } => {
                    if !(*beta > 1.0) {
                        bail!("entry `{name}`, field `beta`: must exceed 1");
                    }
                    if !(*eps > 0.0) {
                        bail!("entry `{name}`, field `eps`: must be positive");
                    }
                }
                EntrySpec::R2Sg { name, theta_hat, .. } => {
                    if !(*theta_hat > 0.0 && *theta_hat < 1.0) {
                        bail!("entry `{name}`, field `theta_hat`: must lie in (0, 1)");
                    }
                }
                EntrySpec::Shor { name, c, .. } => {
                    if !(*c > 0.0) {
                        bail!("entry `{name}`, field `c`: must be positive");
                    }
                }
                EntrySpec::Schedule { .. } => {}
            }
        }
        Ok(())
    }
}
