//! Canned experiment configurations reproducing the benchmark figures:
//! decaying-stepsize rate plots and staircase-vs-baseline comparisons on
//! random least-absolute-deviations and sparse-SVM instances, plus the two
//! dataset-backed variants (which need the data files on disk).

use crate::config::{
    EntrySpec, ExperimentConfig, GroupingSpec, PlotSpec, PlotX, PlotY, ProblemSpec, ReferencePolicy,
};
use anyhow::{bail, Result};
use subgrad::schedules::StepsizeSchedule;

/// Seed of the random instances used by the synthetic presets.
pub const PRESET_SEED: u64 = 20240811;

pub const PRESET_NAMES: [&str; 6] = ["fig1", "fig2", "fig3", "fig5", "spacega", "glass"];

pub fn preset(name: &str, budget: Option<u64>, out_dir: Option<String>, seed: Option<u64>) -> Result<ExperimentConfig> {
    let seed = seed.unwrap_or(PRESET_SEED);
    // Default budgets: 1e5 evaluations, except the adaptive-vs-misspecified
    // comparison, which gets 2e5 so the doubling trick can afford the outer
    // loop that reaches its deep plateau.
    let budget = budget.unwrap_or(if name == "fig3" { 200_000 } else { 100_000 });
    let output_dir = out_dir.unwrap_or_else(|| format!("out/{name}"));
    let lad = ProblemSpec::Lad { m: 100, n: 50, tau: 1.0, seed };
    let reference = ReferencePolicy::AdaptiveStairs { eps: 1e-14, eval_cap: 1_600_000 };
    let poly = |name: &str, alpha1: f64, p: f64| -> Result<EntrySpec> {
        Ok(EntrySpec::Schedule { name: name.into(), schedule: StepsizeSchedule::polynomial(alpha1, p)? })
    };

    let cfg = match name {
        // Two decaying stepsizes on random LAD, log-log rate plot.
        "fig1" => ExperimentConfig {
            budget,
            output_dir,
            init_seed: seed ^ 0xA11CE,
            problem: lad,
            reference,
            plot: PlotSpec { y: PlotY::Gap, x: PlotX::K, log_x: true },
            entries: vec![poly("poly-099", 0.1, 0.99)?, poly("poly-05", 0.01, 0.5)?],
        },
        // Staircase scheme vs restart/geometric baselines (tuned growth
        // constants) and the two decaying stepsizes.
        "fig2" => ExperimentConfig {
            budget,
            output_dir,
            init_seed: seed ^ 0xA11CE,
            problem: lad,
            reference,
            plot: PlotSpec { y: PlotY::Gap, x: PlotX::Evals, log_x: false },
            entries: vec![
                EntrySpec::DsSg {
                    name: "dssg".into(),
                    c: 22.0,
                    beta: 4.0,
                    eps: 1e-5,
                    omega1: None,
                    extend_to_budget: Some(true),
                },
                EntrySpec::Rsg { name: "rsg".into(), c: 15.0, beta: 4.0, eps: 1e-5 },
                EntrySpec::Shor { name: "shor".into(), c: 11.0, d1_bound: None },
                poly("poly-099", 0.1, 0.99)?,
                poly("poly-05", 0.01, 0.5)?,
            ],
        },
        // Mis-specified growth constants (c = 100) against the adaptive
        // doubling trick started from c1 = G.
        "fig3" => ExperimentConfig {
            budget,
            output_dir,
            init_seed: seed ^ 0xA11CE,
            problem: lad,
            reference,
            plot: PlotSpec { y: PlotY::Gap, x: PlotX::Evals, log_x: false },
            entries: vec![
                EntrySpec::Ds2Sg {
                    name: "ds2sg".into(),
                    beta: 4.0,
                    // Deep per-loop staircase: the adaptive halving finds
                    // the scale while every loop runs its stepsize far
                    // enough down to expose near-exact convergence.
                    eps: 1e-14,
                    c1: None,
                    omega_c: None,
                    max_outer: None,
                },
                EntrySpec::DsSg {
                    name: "dssg-c100".into(),
                    c: 100.0,
                    beta: 4.0,
                    eps: 1e-5,
                    omega1: None,
                    extend_to_budget: None,
                },
                EntrySpec::Rsg { name: "rsg-c100".into(), c: 100.0, beta: 4.0, eps: 1e-5 },
                EntrySpec::Shor { name: "shor-c100".into(), c: 100.0, d1_bound: None },
                EntrySpec::R2Sg {
                    name: "r2sg".into(),
                    theta_hat: 0.8,
                    stage_len: None,
                    stages: None,
                    alpha1: None,
                },
                poly("poly-099", 0.1, 0.99)?,
                poly("poly-05", 0.01, 0.5)?,
            ],
        },
        // Sparse-SVM comparison: doubling trick vs adaptive restarts vs two
        // decaying stepsizes.
        "fig5" => ExperimentConfig {
            budget,
            output_dir,
            init_seed: seed ^ 0xA11CE,
            problem: ProblemSpec::Svm { m: 100, n: 50, tau: 2.0, seed },
            reference,
            plot: PlotSpec { y: PlotY::Gap, x: PlotX::Evals, log_x: false },
            entries: vec![
                EntrySpec::Ds2Sg {
                    name: "ds2sg".into(),
                    beta: 2.0,
                    eps: 1e-5,
                    c1: None,
                    omega_c: None,
                    max_outer: None,
                },
                EntrySpec::R2Sg {
                    name: "r2sg".into(),
                    theta_hat: 0.5,
                    stage_len: None,
                    stages: None,
                    alpha1: None,
                },
                poly("poly-1", 0.1, 1.0)?,
                poly("poly-05", 0.01, 0.5)?,
            ],
        },
        // Least absolute deviations on the space.ga excerpt (first 100
        // rows, 6 features); needs the dataset file.
        "spacega" => ExperimentConfig {
            budget,
            output_dir,
            init_seed: seed ^ 0xA11CE,
            problem: ProblemSpec::DatasetLad { path: "space.ga".into(), tau: 5.0, m_limit: Some(100) },
            reference,
            plot: PlotSpec { y: PlotY::Gap, x: PlotX::Evals, log_x: false },
            entries: vec![
                EntrySpec::Ds2Sg {
                    name: "ds2sg".into(),
                    beta: 2.0,
                    eps: 1e-12,
                    c1: None,
                    omega_c: None,
                    max_outer: None,
                },
                poly("poly-1", 1.0, 1.0)?,
                poly("poly-05", 0.1, 0.5)?,
            ],
        },
        // Sparse SVM on the glass-identification dataset with the label
        // grouping {1,2,3} -> -1, {5,6,7} -> +1.
        "glass" => ExperimentConfig {
            budget,
            output_dir,
            init_seed: seed ^ 0xA11CE,
            problem: ProblemSpec::DatasetSvm {
                path: "glass.scale".into(),
                tau: 2.0,
                m_limit: None,
                grouping: GroupingSpec::GlassScale,
            },
            reference,
            plot: PlotSpec { y: PlotY::Gap, x: PlotX::Evals, log_x: false },
            entries: vec![
                EntrySpec::Ds2Sg {
                    name: "ds2sg".into(),
                    beta: 4.0,
                    eps: 1e-8,
                    c1: None,
                    omega_c: None,
                    max_outer: None,
                },
                EntrySpec::R2Sg {
                    name: "r2sg".into(),
                    theta_hat: 0.5,
                    stage_len: None,
                    stages: None,
                    alpha1: None,
                },
                poly("poly-1", 0.1, 1.0)?,
                poly("poly-05", 0.01, 0.5)?,
            ],
        },
        other => bail!("unknown preset `{other}`; available: {}", PRESET_NAMES.join(", ")),
    };
    cfg.validate()?;
    Ok(cfg)
}
