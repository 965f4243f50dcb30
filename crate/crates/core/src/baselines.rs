//! Restart-with-averaging baselines used for benchmark comparisons.
//!
//! These follow the usual restarted-subgradient template: a fixed number of
//! constant-stepsize iterations per stage, restarting each stage from the
//! running average of the previous one, with the stepsize shrinking between
//! stages. The adaptive variant repeats that scheme with geometrically
//! growing stage budgets while keeping the initial stepsize, steering by a
//! surrogate growth exponent below 1. Exact stage-length and shrink choices
//! are configuration, not contract; these runs are for benchmark parity,
//! not bound verification.

use crate::problem::ProblemInstance;
use crate::solvers::Driver;
use crate::trace::{PhaseRecord, SolverReport};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RsgConfig {
    /// Iterations per stage.
    pub stage_len: u64,
    /// Number of stages.
    pub stages: u32,
    /// Stepsize of the first stage.
    pub alpha1: f64,
    /// Factor by which the stage stepsize divides after each stage; must
    /// exceed 1 whenever there is more than one stage.
    pub shrink: f64,
}

impl RsgConfig {
    pub fn validate(&self) -> Result<()> {
        if self.stage_len == 0 {
            return Err(Error::invalid("stage_len", "must be at least 1"));
        }
        if self.stages == 0 {
            return Err(Error::invalid("stages", "must be at least 1"));
        }
        if !(self.alpha1 > 0.0 && self.alpha1.is_finite()) {
            return Err(Error::invalid("alpha1", format!("must be positive, got {}", self.alpha1)));
        }
        if self.stages > 1 && !(self.shrink > 1.0) {
            return Err(Error::invalid("shrink", "stage stepsizes must be strictly decreasing"));
        }
        if !(self.shrink >= 1.0) {
            return Err(Error::invalid("shrink", format!("must be at least 1, got {}", self.shrink)));
        }
        Ok(())
    }
}

/// Restarted averaged subgradient run: each stage executes `stage_len`
/// constant-stepsize steps and hands the arithmetic mean of its iterates to
/// the next stage. The trace holds the raw iterates; each stage mean shows
/// up as the first evaluated point of the following stage, and the final
/// mean is the returned point.
pub fn rsg(problem: &ProblemInstance, cfg: &RsgConfig, x1: &[f64]) -> Result<SolverReport> {
    cfg.validate()?;
    let mut driver = Driver::new(problem, x1)?;
    let mut phases = Vec::with_capacity(cfg.stages as usize);
    let mut alpha = cfg.alpha1;
    for stage in 1..=cfg.stages {
        let evals_start = driver.subgrad_evals();
        let mut mean = vec![0.0; problem.dim()];
        for _ in 0..cfg.stage_len {
            for (m, xi) in mean.iter_mut().zip(driver.current_point()) {
                *m += xi;
            }
            driver.step(alpha)?;
        }
        for m in &mut mean {
            *m /= cfg.stage_len as f64;
        }
        // The mean of feasible points is feasible (convex constraint set).
        driver.set_point(mean);
        phases.push(PhaseRecord {
            outer: 1,
            stair: stage,
            steps: cfg.stage_len,
            alpha,
            c_estimate: f64::NAN,
            evals_start,
            evals_end: driver.subgrad_evals(),
            end_dist_sq: driver.current_dist_sq(),
        });
        alpha /= cfg.shrink;
    }
    Ok(driver.finish(phases))
}

/// Adaptive restart scheme for unknown growth constants, parameterized by a
/// surrogate exponent `theta_hat < 1`.
#[derive(Debug, Clone, Copy)]
pub struct R2sgConfig {
    /// Per-outer-loop restart block; `inner.stage_len` is the first loop's
    /// stage budget.
    pub inner: RsgConfig,
    /// Geometric growth factor of the stage budget across outer loops.
    pub growth: f64,
    pub outer_loops: u32,
}

impl R2sgConfig {
    /// Default growth from the surrogate exponent: halving the accuracy
    /// target multiplies the restart budget by `2^{2(1-theta_hat)}`.
    /// Rejects `theta_hat >= 1` (the scheme only applies below the sharp
    /// case) and nonpositive values.
    pub fn from_theta_hat(inner: RsgConfig, theta_hat: f64, outer_loops: u32) -> Result<Self> {
        if !(theta_hat > 0.0 && theta_hat < 1.0) {
            return Err(Error::invalid(
                "theta_hat",
                format!("must lie in (0, 1), got {theta_hat}"),
            ));
        }
        Ok(R2sgConfig { inner, growth: 2f64.powf(2.0 * (1.0 - theta_hat)), outer_loops })
    }

    pub fn validate(&self) -> Result<()> {
        self.inner.validate()?;
        if !(self.growth > 1.0 && self.growth.is_finite()) {
            return Err(Error::invalid("growth", format!("must exceed 1, got {}", self.growth)));
        }
        if self.outer_loops == 0 {
            return Err(Error::invalid("outer_loops", "must be at least 1"));
        }
        Ok(())
    }

    /// Stage budget of outer loop `l` (1-based):
    /// `ceil(stage_len * growth^{l-1})`.
    pub fn budget(&self, l: u32) -> u64 {
        (self.inner.stage_len as f64 * self.growth.powi(l as i32 - 1)).ceil() as u64
    }
}

/// Outer loop over restart blocks with geometrically growing stage budgets
/// and an unchanged initial stepsize.
pub fn r2sg(problem: &ProblemInstance, cfg: &R2sgConfig, x1: &[f64]) -> Result<SolverReport> {
    cfg.validate()?;
    let mut driver = Driver::new(problem, x1)?;
    let mut phases = Vec::new();
    for l in 1..=cfg.outer_loops {
        let budget = cfg.budget(l);
        let mut alpha = cfg.inner.alpha1;
        for stage in 1..=cfg.inner.stages {
            let evals_start = driver.subgrad_evals();
            let mut mean = vec![0.0; problem.dim()];
            for _ in 0..budget {
                for (m, xi) in mean.iter_mut().zip(driver.current_point()) {
                    *m += xi;
                }
                driver.step(alpha)?;
            }
            for m in &mut mean {
                *m /= budget as f64;
            }
            driver.set_point(mean);
            phases.push(PhaseRecord {
                outer: l,
                stair: stage,
                steps: budget,
                alpha,
                c_estimate: f64::NAN,
                evals_start,
                evals_end: driver.subgrad_evals(),
                end_dist_sq: driver.current_dist_sq(),
            });
            alpha /= cfg.inner.shrink;
        }
    }
    Ok(driver.finish(phases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{self, PowerGrowthProblem};
    use crate::solvers::fixed_sg;

    fn abs1d() -> ProblemInstance {
        problems::power_growth(PowerGrowthProblem { c: 1.0, theta: 1.0, dim: 1, radius: 1.0 }).unwrap()
    }

    #[test]
    fn stage_output_is_the_arithmetic_mean() {
        // On h = |x| from 0.8 with alpha = 0.01, iterates stay positive, so
        // the objective column reconstructs them exactly.
        let p = abs1d();
        let cfg = RsgConfig { stage_len: 10, stages: 2, alpha1: 0.01, shrink: 2.0 };
        let report = rsg(&p, &cfg, &[0.8]).unwrap();
        let stage1: Vec<f64> = report.trace.rows[..10].iter().map(|r| r.obj).collect();
        let mean: f64 = stage1.iter().sum::<f64>() / 10.0;
        // First row of stage 2 evaluates the averaged point.
        let restart_obj = report.trace.rows[10].obj;
        assert!((restart_obj - mean).abs() <= 1e-12, "{restart_obj} vs {mean}");
    }

    #[test]
    fn single_stage_with_unit_shrink_matches_fixed_run_plus_averaging() {
        let p = abs1d();
        let cfg = RsgConfig { stage_len: 20, stages: 1, alpha1: 0.01, shrink: 1.0 };
        let averaged = rsg(&p, &cfg, &[0.5]).unwrap();
        let plain = fixed_sg(&p, 20, 0.01, &[0.5]).unwrap();
        for (a, b) in averaged.trace.rows.iter().zip(&plain.trace.rows) {
            assert_eq!(a.obj.to_bits(), b.obj.to_bits());
        }
        // Only the returned point differs: the average instead of x_{K+1}.
        let mean = (0..20).map(|i| 0.5 - 0.01 * i as f64).sum::<f64>() / 20.0;
        assert!((averaged.final_point[0] - mean).abs() < 1e-12);
        assert!((plain.final_point[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn multi_stage_requires_strict_shrink() {
        let cfg = RsgConfig { stage_len: 5, stages: 3, alpha1: 0.1, shrink: 1.0 };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn r2sg_budgets_grow_geometrically() {
        let inner = RsgConfig { stage_len: 7, stages: 2, alpha1: 0.05, shrink: 2.0 };
        let cfg = R2sgConfig { inner, growth: 3.0, outer_loops: 4 };
        let p = abs1d();
        let report = r2sg(&p, &cfg, &[0.9]).unwrap();
        for ph in &report.phases {
            let expected = (7.0 * 3f64.powi(ph.outer as i32 - 1)).ceil() as u64;
            assert_eq!(ph.steps, expected);
            assert_eq!(ph.steps, cfg.budget(ph.outer));
        }
        // Initial stepsize resets every outer loop.
        for ph in report.phases.iter().filter(|ph| ph.stair == 1) {
            assert_eq!(ph.alpha, 0.05);
        }
    }

    #[test]
    fn r2sg_rejects_surrogate_exponent_at_or_above_one() {
        let inner = RsgConfig { stage_len: 5, stages: 1, alpha1: 0.1, shrink: 1.0 };
        assert!(R2sgConfig::from_theta_hat(inner, 1.0, 2).is_err());
        assert!(R2sgConfig::from_theta_hat(inner, 1.3, 2).is_err());
        let cfg = R2sgConfig::from_theta_hat(inner, 0.5, 2).unwrap();
        assert!((cfg.growth - 2.0).abs() < 1e-15);
        let cfg = R2sgConfig::from_theta_hat(inner, 0.8, 2).unwrap();
        assert!((cfg.growth - 2f64.powf(0.4)).abs() < 1e-15);
    }
}
