//! Experiment runner: builds the configured problem once, draws one shared
//! initial point, resolves the reference optimum, runs every entry under
//! the same evaluation budget, and emits traces, a summary, and a plot.

use crate::config::{
    EntrySpec, ExperimentConfig, GroupingSpec, PlotSpec, PlotX, PlotY, ProblemSpec, ReferencePolicy,
};
use crate::csvio;
use crate::plot;
use crate::DATA_DIR_ENV;
use anyhow::{bail, Context, Result};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use subgrad::baselines::{self, R2sgConfig, RsgConfig};
use subgrad::datasets::{self, LabelGrouping};
use subgrad::problems::random::Rng64;
use subgrad::problems::{self, LadProblem, SvmProblem};
use subgrad::schedules::StepsizeSchedule;
use subgrad::solvers::{self, Ds2Progress, Ds2SgConfig, Ds2Stopping, DsSgConfig};
use subgrad::trace::SolverReport;
use subgrad::{HebParams, ProblemInstance};

/// A constructed problem plus the metadata entries need to size themselves.
pub struct BuiltProblem {
    pub instance: ProblemInstance,
    /// Subgradient-norm bound used for entry parameter derivation.
    pub g_bound: f64,
    /// Default squared diameter of the feasible set.
    pub omega_c: f64,
    /// Growth exponent of the feasible problem class.
    pub theta: f64,
    /// Stable description used as the reference-cache key.
    pub signature: String,
}

pub fn build_problem(spec: &ProblemSpec) -> Result<BuiltProblem> {
    match spec {
        ProblemSpec::Lad { m, n, tau, seed } => {
            let lad = problems::make_random_lad(*m, *n, *tau, *seed)?;
            lad_built(&lad, format!("lad(m={m},n={n},tau={tau},seed={seed})"))
        }
        ProblemSpec::Svm { m, n, tau, seed } => {
            let svm = problems::make_random_svm(*m, *n, *tau, *seed)?;
            svm_built(&svm, format!("svm(m={m},n={n},tau={tau},seed={seed})"))
        }
        ProblemSpec::Power { c, theta, dim, radius } => {
            let instance = problems::power_growth(problems::PowerGrowthProblem {
                c: *c,
                theta: *theta,
                dim: *dim,
                radius: *radius,
            })?;
            let g = instance.heb().g();
            Ok(BuiltProblem {
                instance,
                g_bound: g,
                omega_c: 4.0 * radius * radius,
                theta: *theta,
                signature: format!("power(c={c},theta={theta},dim={dim},radius={radius})"),
            })
        }
        ProblemSpec::L1Box { dim, half_width } => {
            let instance = problems::l1_box(*dim, *half_width)?;
            let g = instance.heb().g();
            Ok(BuiltProblem {
                instance,
                g_bound: g,
                omega_c: 4.0 * *dim as f64 * half_width * half_width,
                theta: 1.0,
                signature: format!("l1box(dim={dim},w={half_width})"),
            })
        }
        ProblemSpec::DatasetLad { path, tau, m_limit } => {
            let ds = datasets::load_libsvm(&resolve_dataset(path)?, *m_limit, LabelGrouping::None)?;
            let lad = LadProblem { e: ds.features, b: ds.labels, tau: *tau };
            lad_built(&lad, format!("dataset-lad({path},tau={tau},m_limit={m_limit:?})"))
        }
        ProblemSpec::DatasetSvm { path, tau, m_limit, grouping } => {
            let grouping_rule = match grouping {
                GroupingSpec::None => LabelGrouping::None,
                GroupingSpec::GlassScale => LabelGrouping::GlassScale,
            };
            let ds = datasets::load_libsvm(&resolve_dataset(path)?, *m_limit, grouping_rule)?;
            let svm = SvmProblem { points: ds.features, labels: ds.labels, tau: *tau };
            svm_built(&svm, format!("dataset-svm({path},tau={tau},m_limit={m_limit:?},{grouping:?})"))
        }
    }
}

fn lad_built(lad: &LadProblem, signature: String) -> Result<BuiltProblem> {
    let g = lad.subgradient_norm_bound();
    Ok(BuiltProblem {
        instance: lad.instance(1.0)?,
        g_bound: g,
        omega_c: 4.0 * lad.tau * lad.tau,
        theta: 1.0,
        signature,
    })
}

fn svm_built(svm: &SvmProblem, signature: String) -> Result<BuiltProblem> {
    let g = svm.subgradient_norm_bound();
    Ok(BuiltProblem {
        instance: svm.instance(1.0)?,
        g_bound: g,
        omega_c: 4.0 * svm.tau * svm.tau,
        theta: 1.0,
        signature,
    })
}

fn resolve_dataset(path: &str) -> Result<PathBuf> {
    let direct = PathBuf::from(path);
    if direct.exists() {
        return Ok(direct);
    }
    if let Ok(root) = std::env::var(DATA_DIR_ENV) {
        let joined = Path::new(&root).join(path);
        if joined.exists() {
            return Ok(joined);
        }
        bail!("dataset `{path}` not found directly or under {DATA_DIR_ENV}={root}");
    }
    bail!("dataset `{path}` not found; set {DATA_DIR_ENV} to the dataset directory");
}

/// Shared initial point: a seeded standard-normal draw projected onto the
/// feasible set.
pub fn initial_point(built: &BuiltProblem, init_seed: u64) -> Vec<f64> {
    let mut rng = Rng64::seed(init_seed);
    let raw: Vec<f64> = (0..built.instance.dim()).map(|_| rng.normal()).collect();
    built.instance.project(&raw)
}

/// Result of one entry run, measured within the shared budget.
#[derive(Debug, Clone)]
pub struct EntryOutcome {
    pub name: String,
    pub evals_total: u64,
    pub evals_within_budget: u64,
    pub best_obj: f64,
    /// Best objective gap within the budget, when a reference exists.
    pub best_gap: Option<f64>,
    /// Tail slope of the squared gap on a log-log scale, when fittable.
    pub gap_sq_slope: Option<f64>,
    pub trace_path: PathBuf,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub h_ref: Option<f64>,
    pub outcomes: Vec<EntryOutcome>,
    pub summary_path: PathBuf,
    pub plot_path: PathBuf,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let built = build_problem(&cfg.problem)?;
    let out_dir = PathBuf::from(&cfg.output_dir);
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create output dir {}", out_dir.display()))?;
    let x1 = initial_point(&built, cfg.init_seed);
    let h_ref = reference_value(cfg, &built, &x1)?;

    let mut outcomes = Vec::with_capacity(cfg.entries.len());
    for entry in &cfg.entries {
        let report = run_entry(entry, &built, cfg.budget, &x1)
            .with_context(|| format!("entry `{}`", entry.name()))?;
        let trace_path = out_dir.join(format!("{}.csv", entry.name()));
        csvio::write_trace(&trace_path, &report.trace, h_ref, cfg.budget)?;
        outcomes.push(summarize_entry(entry.name(), &report, h_ref, cfg.budget, trace_path));
    }

    let plot_path = out_dir.join("plot.svg");
    render_plot(&plot_path, &cfg.plot, &outcomes, h_ref)?;

    let summary_path = out_dir.join("summary.txt");
    write_summary(&summary_path, &built.signature, h_ref, &outcomes)?;

    Ok(ExperimentSummary { h_ref, outcomes, summary_path, plot_path })
}

fn summarize_entry(
    name: &str,
    report: &SolverReport,
    h_ref: Option<f64>,
    budget: u64,
    trace_path: PathBuf,
) -> EntryOutcome {
    let in_budget = report.trace.rows.iter().take_while(|r| r.evals <= budget);
    let mut best_obj = f64::INFINITY;
    let mut evals_within = 0;
    let mut ks = Vec::new();
    let mut gaps_sq = Vec::new();
    for row in in_budget {
        best_obj = best_obj.min(row.obj);
        evals_within = row.evals;
        if let Some(h) = h_ref {
            let gap = (row.obj - h).max(0.0);
            if gap > 0.0 {
                ks.push(row.k as f64);
                gaps_sq.push(gap * gap);
            }
        }
    }
    let best_gap = h_ref.map(|h| (best_obj - h).max(0.0));
    let tail_start = ks.len() / 2;
    let gap_sq_slope = if ks.len() - tail_start >= 10 {
        subgrad::analysis::fit_power_law(&ks[tail_start..], &gaps_sq[tail_start..])
            .ok()
            .map(|fit| fit.exponent)
    } else {
        None
    };
    EntryOutcome {
        name: name.to_string(),
        evals_total: report.subgrad_evals,
        evals_within_budget: evals_within,
        best_obj,
        best_gap,
        gap_sq_slope,
        trace_path,
        warnings: report.warnings.clone(),
    }
}

fn reference_value(cfg: &ExperimentConfig, built: &BuiltProblem, x1: &[f64]) -> Result<Option<f64>> {
    match &cfg.reference {
        ReferencePolicy::None => Ok(None),
        ReferencePolicy::Value { value } => Ok(Some(*value)),
        ReferencePolicy::AdaptiveStairs { eps, eval_cap } => {
            let key = format!(
                "{}|init_seed={}|eps={eps:e}|cap={eval_cap}",
                built.signature, cfg.init_seed
            );
            let cache = PathBuf::from(&cfg.output_dir).join("cache");
            std::fs::create_dir_all(&cache)?;
            let cache_file = cache.join(format!("href-{:016x}.txt", fnv64(&key)));
            if let Ok(text) = std::fs::read_to_string(&cache_file) {
                if let Ok(v) = text.trim().parse::<f64>() {
                    return Ok(Some(v));
                }
            }
            let value = adaptive_reference(built, x1, *eps, *eval_cap)?;
            std::fs::write(&cache_file, format!("{}\n", csvio::fmt_f64(value)))?;
            Ok(Some(value))
        }
    }
}

/// High-precision reference: the adaptive staircase scheme run against the
/// evaluation cap (stopping before a loop that cannot fit), keeping the
/// best objective seen.
fn adaptive_reference(built: &BuiltProblem, x1: &[f64], eps: f64, eval_cap: u64) -> Result<f64> {
    let cap = eval_cap;
    let prev = Arc::new(std::sync::atomic::AtomicU64::new(0));
    let cfg = Ds2SgConfig::new(
        built.g_bound,
        built.theta,
        built.g_bound,
        2.0,
        built.omega_c,
        eps,
        Ds2Stopping::External(Arc::new(move |pr: &Ds2Progress| {
            let last = prev.swap(pr.subgrad_evals, std::sync::atomic::Ordering::Relaxed);
            let loop_cost = pr.subgrad_evals.saturating_sub(last);
            pr.subgrad_evals.saturating_add(4 * loop_cost) > cap
        })),
    )?;
    Ok(solvers::ds2_sg(&built.instance, &cfg, x1)?.best_obj)
}

fn fnv64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn run_entry(
    entry: &EntrySpec,
    built: &BuiltProblem,
    budget: u64,
    x1: &[f64],
) -> Result<SolverReport> {
    let g = built.g_bound;
    let theta = built.theta;
    match entry {
        EntrySpec::Schedule { schedule, .. } => {
            Ok(solvers::generic_sg(&built.instance, schedule, budget, x1)?)
        }
        EntrySpec::DsSg { c, beta, eps, omega1, extend_to_budget, .. } => {
            let heb = HebParams::new(*c, theta, g)?;
            let omega1 = omega1.unwrap_or(built.omega_c);
            let mut cfg = DsSgConfig::new(heb, *beta, omega1, *eps)?;
            if extend_to_budget.unwrap_or(false) {
                cfg.stairs = cfg
                    .stairs
                    .max(DsSgConfig::stairs_within_budget(&heb, *beta, omega1, budget));
            }
            Ok(solvers::ds_sg(&built.instance, &cfg, x1)?)
        }
        EntrySpec::Ds2Sg { beta, eps, c1, omega_c, max_outer, .. } => {
            let c1 = c1.unwrap_or(g);
            let omega_c = omega_c.unwrap_or(built.omega_c);
            let stopping = match max_outer {
                Some(n) => Ds2Stopping::MaxOuterLoops(*n),
                None => {
                    // Loop costs quadruple (the halved estimate quadruples
                    // the stair lengths), so stop before starting a loop
                    // that cannot fit in the remaining budget.
                    let cap = budget;
                    let prev = Arc::new(std::sync::atomic::AtomicU64::new(0));
                    Ds2Stopping::External(Arc::new(move |pr: &Ds2Progress| {
                        let last = prev.swap(pr.subgrad_evals, std::sync::atomic::Ordering::Relaxed);
                        let loop_cost = pr.subgrad_evals.saturating_sub(last);
                        pr.subgrad_evals.saturating_add(4 * loop_cost) > cap
                    }))
                }
            };
            let cfg = Ds2SgConfig::new(c1, theta, g, *beta, omega_c, *eps, stopping)?;
            Ok(solvers::ds2_sg(&built.instance, &cfg, x1)?)
        }
        EntrySpec::Rsg { c, beta, eps, .. } => {
            let kappa = g / c;
            let exp = 1.0 / (2.0 * theta);
            let raw_len =
                theta * kappa * kappa * beta.powf(exp) * (2.0 * beta).ln() * built.omega_c.powf(1.0 - 1.0 / theta);
            let stage_len = (raw_len.ceil() as u64).clamp(1, budget);
            let stages = (((built.omega_c / eps).ln() / beta.ln()).ceil() as u32).max(1);
            let alpha1 = 2.0 * c / (g * g) * (built.omega_c / (2.0 * beta)).powf(exp);
            let cfg = RsgConfig { stage_len, stages, alpha1, shrink: beta.powf(exp) };
            Ok(baselines::rsg(&built.instance, &cfg, x1)?)
        }
        EntrySpec::R2Sg { theta_hat, stage_len, stages, alpha1, .. } => {
            let inner = RsgConfig {
                stage_len: stage_len.unwrap_or(500),
                stages: stages.unwrap_or(6),
                alpha1: alpha1.unwrap_or(0.5 * built.omega_c.sqrt() / g),
                shrink: 2.0,
            };
            let mut cfg = R2sgConfig::from_theta_hat(inner, *theta_hat, 1)?;
            // Grow the outer loop count until the next loop would overshoot
            // the budget.
            let mut total = cfg.budget(1).saturating_mul(inner.stages as u64);
            let mut outer = 1;
            loop {
                let next = cfg.budget(outer + 1).saturating_mul(inner.stages as u64);
                if total.saturating_add(next) > budget {
                    break;
                }
                total += next;
                outer += 1;
            }
            cfg.outer_loops = outer;
            Ok(baselines::r2sg(&built.instance, &cfg, x1)?)
        }
        EntrySpec::Shor { c, d1_bound, .. } => {
            let heb = HebParams::new(*c, 1.0, g)?;
            let schedule = StepsizeSchedule::shor_geometric(&heb, d1_bound.unwrap_or(built.omega_c))?;
            Ok(solvers::generic_sg(&built.instance, &schedule, budget, x1)?)
        }
    }
}

fn render_plot(
    path: &Path,
    spec: &PlotSpec,
    outcomes: &[EntryOutcome],
    h_ref: Option<f64>,
) -> Result<()> {
    let mut series = Vec::new();
    for outcome in outcomes {
        let rows = csvio::read_trace(&outcome.trace_path)?;
        let mut pts = Vec::new();
        for row in &rows {
            let y = match spec.y {
                PlotY::Gap => row.gap,
                PlotY::DistSq => row.dist_sq,
            };
            let x = match spec.x {
                PlotX::Evals => row.evals as f64,
                PlotX::K => row.k as f64,
            };
            if let Some(y) = y {
                if y > 0.0 {
                    pts.push((x, y));
                }
            }
        }
        series.push(plot::Series { name: outcome.name.clone(), points: pts });
    }
    let y_label = match spec.y {
        PlotY::Gap => {
            if h_ref.is_some() {
                "objective gap"
            } else {
                "objective gap (no reference)"
            }
        }
        PlotY::DistSq => "squared distance to solution set",
    };
    let x_label = match spec.x {
        PlotX::Evals => "subgradient evaluations",
        PlotX::K => "iteration",
    };
    let svg = plot::render_svg(&series, x_label, y_label, spec.log_x)?;
    std::fs::write(path, svg)?;
    Ok(())
}

fn write_summary(
    path: &Path,
    signature: &str,
    h_ref: Option<f64>,
    outcomes: &[EntryOutcome],
) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("problem: {signature}\n"));
    match h_ref {
        Some(h) => out.push_str(&format!("reference optimum: {}\n", csvio::fmt_f64(h))),
        None => out.push_str("reference optimum: none\n"),
    }
    out.push_str("name\tevals\tbest_obj\tbest_gap\tgap_sq_slope\n");
    for o in outcomes {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            o.name,
            o.evals_within_budget,
            csvio::fmt_f64(o.best_obj),
            o.best_gap.map_or("-".into(), csvio::fmt_f64),
            o.gap_sq_slope.map_or("-".into(), |s| format!("{s:.4}")),
        ));
        for w in &o.warnings {
            out.push_str(&format!("  warning({}): {w}\n", o.name));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
