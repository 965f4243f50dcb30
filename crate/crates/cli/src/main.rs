use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use subgrad_cli::{bounds, config::ExperimentConfig, csvio, experiment, presets};

#[derive(Parser)]
#[command(
    name = "subgrad",
    about = "Benchmark harness for projected subgradient methods under Hölderian growth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config file.
    Run {
        config: PathBuf,
    },
    /// Run a canned experiment (fig1, fig2, fig3, fig5, spacega, glass).
    Preset {
        name: String,
        /// Subgradient-evaluation budget per entry.
        #[arg(long)]
        budget: Option<u64>,
        /// Output directory (defaults to out/<name>).
        #[arg(long)]
        out: Option<String>,
        /// Instance seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the equivalent config file instead of running.
        #[arg(long)]
        print_config: bool,
    },
    /// Fit a power law to a trace column on a log-log scale.
    Fit {
        trace: PathBuf,
        #[arg(long, value_enum, default_value_t = FitColumn::DistSq)]
        column: FitColumn,
        /// Fraction of trailing rows used for the fit.
        #[arg(long, default_value_t = 0.5)]
        tail: f64,
    },
    /// Evaluate configured convergence bounds into a CSV table.
    Bounds {
        config: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitColumn {
    DistSq,
    Gap,
    GapSq,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            report(experiment::run_experiment(&cfg)?);
        }
        Command::Preset { name, budget, out, seed, print_config } => {
            let cfg = presets::preset(&name, budget, out, seed)?;
            if print_config {
                print!("{}", cfg.to_toml());
            } else {
                report(experiment::run_experiment(&cfg)?);
            }
        }
        Command::Fit { trace, column, tail } => {
            let rows = csvio::read_trace(&trace)?;
            if !(tail > 0.0 && tail <= 1.0) {
                bail!("--tail must lie in (0, 1]");
            }
            let start = rows.len() - ((rows.len() as f64 * tail).ceil() as usize).min(rows.len());
            let mut ks = Vec::new();
            let mut es = Vec::new();
            for row in &rows[start..] {
                let value = match column {
                    FitColumn::DistSq => row.dist_sq,
                    FitColumn::Gap => row.gap,
                    FitColumn::GapSq => row.gap.map(|g| g * g),
                };
                if let Some(v) = value {
                    ks.push(row.k as f64);
                    es.push(v);
                }
            }
            let fit = subgrad::analysis::fit_power_law(&ks, &es)
                .context("fit needs at least 10 positive points in the tail window")?;
            println!(
                "fit over {} points: value ~ {:.6e} * k^{:.6}",
                fit.points, fit.coeff, fit.exponent
            );
        }
        Command::Bounds { config } => {
            let cfg = bounds::load(&config)?;
            let path = bounds::run(&cfg)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn report(summary: experiment::ExperimentSummary) {
    if let Some(h) = summary.h_ref {
        println!("reference optimum: {}", csvio::fmt_f64(h));
    }
    println!("{:<14} {:>10} {:>24} {:>14} {:>10}", "entry", "evals", "best objective", "best gap", "slope");
    for o in &summary.outcomes {
        println!(
            "{:<14} {:>10} {:>24} {:>14} {:>10}",
            o.name,
            o.evals_within_budget,
            format!("{:.12e}", o.best_obj),
            o.best_gap.map_or("-".into(), |g| format!("{g:.3e}")),
            o.gap_sq_slope.map_or("-".into(), |s| format!("{s:.3}")),
        );
        for w in &o.warnings {
            println!("  warning: {w}");
        }
    }
    println!("summary: {}", summary.summary_path.display());
    println!("plot:    {}", summary.plot_path.display());
}
