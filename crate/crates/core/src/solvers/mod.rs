//! Solver drivers: fixed-step and schedule-driven projected subgradient
//! runs, the descending-stairs restart scheme, its doubling-trick variant
//! for unknown growth constants, and the incremental/noisy/normalized
//! extensions.
//!
//! Only the plain projected iteration is provided. Proximal and relaxed
//! variants satisfy the same distance recursion with different constants,
//! but no constants are pinned down for them here, so they are out of
//! scope.

mod extensions;
mod stairs;

pub use extensions::{incremental_sg, noisy_oracle, normalized_sg};
pub use stairs::{ds_sg, ds2_sg, Ds2Progress, Ds2SgConfig, Ds2Stopping, DsSgConfig};

use crate::linalg;
use crate::problem::ProblemInstance;
use crate::schedules::StepsizeSchedule;
use crate::trace::{IterateState, RunTrace, SolverReport, TraceRow};
use crate::{Error, Result};

/// Round up, absorbing floating-point clutter: values within a relative
/// 1e-12 of an integer count as that integer rather than the next one.
pub(crate) fn ceil_guarded(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-12 * (1.0 + x.abs()) {
        nearest.max(0.0) as u64
    } else {
        x.ceil().max(0.0) as u64
    }
}

/// Shared iteration engine. Owns the evolving state and trace; solvers feed
/// it stepsizes. The initial point is projected once so a slightly
/// infeasible start cannot poison the feasibility invariant.
pub(crate) struct Driver<'a> {
    problem: &'a ProblemInstance,
    state: IterateState,
    trace: RunTrace,
    best_obj: f64,
    best_point: Vec<f64>,
    warnings: Vec<String>,
}

impl<'a> Driver<'a> {
    pub(crate) fn new(problem: &'a ProblemInstance, x1: &[f64]) -> Result<Self> {
        if x1.len() != problem.dim() {
            return Err(Error::DimensionMismatch { expected: problem.dim(), got: x1.len() });
        }
        if !linalg::is_finite(x1) {
            return Err(Error::invalid("x1", "initial point has non-finite entries"));
        }
        let x = problem.project(x1);
        Ok(Driver {
            problem,
            best_point: x.clone(),
            state: IterateState { k: 1, x, subgrad_evals: 0 },
            trace: RunTrace::default(),
            best_obj: f64::INFINITY,
            warnings: Vec::new(),
        })
    }

    pub(crate) fn subgrad_evals(&self) -> u64 {
        self.state.subgrad_evals
    }

    pub(crate) fn current_dist_sq(&self) -> Option<f64> {
        self.problem.dist_sq(&self.state.x)
    }

    pub(crate) fn best_obj(&self) -> f64 {
        self.best_obj
    }

    pub(crate) fn push_warning(&mut self, w: String) {
        self.warnings.push(w);
    }

    /// One projected subgradient step with the given stepsize.
    pub(crate) fn step(&mut self, alpha: f64) -> Result<()> {
        let (value, g) = self.evaluate_here()?;
        let norm = linalg::norm2(&g);
        self.advance(alpha, value, &g, norm);
        Ok(())
    }

    /// Evaluate the oracle at the current iterate, counting the call.
    pub(crate) fn evaluate_here(&mut self) -> Result<(f64, Vec<f64>)> {
        let out = self.problem.evaluate(&self.state.x, self.state.subgrad_evals + 1)?;
        self.state.subgrad_evals += 1;
        Ok(out)
    }

    /// Record the current iterate and move along `-alpha * dir`, projecting
    /// back onto the feasible set. `grad_norm` is what the trace reports for
    /// this step (the raw or normalized direction norm, depending on the
    /// method).
    pub(crate) fn advance(&mut self, alpha: f64, value: f64, dir: &[f64], grad_norm: f64) {
        if value < self.best_obj {
            self.best_obj = value;
            self.best_point.clone_from(&self.state.x);
        }
        self.trace.push(TraceRow {
            k: self.state.k,
            alpha,
            obj: value,
            dist_sq: self.current_dist_sq(),
            grad_norm,
            evals: self.state.subgrad_evals,
        });
        let mut raw = self.state.x.clone();
        linalg::axpy(-alpha, dir, &mut raw);
        self.state.x = self.problem.project(&raw);
        self.state.k += 1;
    }

    pub(crate) fn current_point(&self) -> &[f64] {
        &self.state.x
    }

    /// Replace the current iterate (used by restart schemes that continue
    /// from an averaged point). The caller guarantees feasibility.
    pub(crate) fn set_point(&mut self, x: Vec<f64>) {
        debug_assert_eq!(x.len(), self.problem.dim());
        self.state.x = x;
    }

    pub(crate) fn run_constant(&mut self, steps: u64, alpha: f64) -> Result<()> {
        for _ in 0..steps {
            self.step(alpha)?;
        }
        Ok(())
    }

    pub(crate) fn finish(mut self, phases: Vec<crate::trace::PhaseRecord>) -> SolverReport {
        self.trace.final_dist_sq = self.current_dist_sq();
        SolverReport {
            final_dist_sq: self.trace.final_dist_sq,
            final_point: self.state.x,
            best_point: self.best_point,
            best_obj: self.best_obj,
            subgrad_evals: self.state.subgrad_evals,
            trace: self.trace,
            phases,
            warnings: self.warnings,
        }
    }
}

/// Exactly `k_steps` projected subgradient steps with a constant stepsize;
/// returns the iterate after the last step along with the full trace.
pub fn fixed_sg(problem: &ProblemInstance, k_steps: u64, alpha: f64, x1: &[f64]) -> Result<SolverReport> {
    if k_steps == 0 {
        return Err(Error::invalid("k_steps", "must be at least 1"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let mut driver = Driver::new(problem, x1)?;
    driver.run_constant(k_steps, alpha)?;
    Ok(driver.finish(Vec::new()))
}

/// `k_steps` projected subgradient steps drawing `alpha_k` from a schedule.
pub fn generic_sg(
    problem: &ProblemInstance,
    schedule: &StepsizeSchedule,
    k_steps: u64,
    x1: &[f64],
) -> Result<SolverReport> {
    if k_steps == 0 {
        return Err(Error::invalid("k_steps", "must be at least 1"));
    }
    let mut driver = Driver::new(problem, x1)?;
    for k in 1..=k_steps {
        driver.step(schedule.alpha(k))?;
    }
    Ok(driver.finish(Vec::new()))
}

/// Iteration count `K` such that running FixedSG with the accuracy-targeted
/// constant stepsize (`alpha = 2 c eps^{1/(2 theta)} / G^2`) guarantees
/// `d(x_{k+1}, X_h)^2 <= 2 eps` for every `k >= K`.
///
/// For `theta <= 1/2` the admissible-accuracy condition is
/// `eps <= (theta kappa^2 / 2)^{theta/(1-theta)}`; for `theta >= 1/2` the
/// requirements involve an upper bound `Dhat` on the squared distances
/// (defaulted to `max(d1_sq, eps + 4 eps^{1/theta}/kappa^2)`, the bound that
/// the boundedness part of the analysis provides).
pub fn fixed_sg_iteration_count(
    eps: f64,
    heb: &crate::HebParams,
    d1_sq: f64,
    dhat: Option<f64>,
) -> Result<u64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("eps", format!("must be positive, got {eps}")));
    }
    if !(d1_sq > 0.0 && d1_sq.is_finite()) {
        return Err(Error::invalid("d1_sq", format!("must be positive, got {d1_sq}")));
    }
    let theta = heb.theta();
    let kappa = heb.kappa();
    let log_term = (d1_sq / eps).ln().max(0.0);
    if theta <= 0.5 {
        let cap = (theta * kappa * kappa / 2.0).powf(theta / (1.0 - theta));
        if eps > cap {
            return Err(Error::precondition(
                "eps <= (theta*kappa^2/2)^(theta/(1-theta))",
                format!("eps = {eps} exceeds the admissible accuracy {cap}"),
            ));
        }
        let k = 0.5 * theta * kappa * kappa * log_term * eps.powf(1.0 - 1.0 / theta);
        Ok(ceil_guarded(k))
    } else {
        let dhat = dhat.unwrap_or_else(|| d1_sq.max(eps + 4.0 * eps.powf(1.0 / theta) / (kappa * kappa)));
        if d1_sq > dhat {
            return Err(Error::precondition(
                "d(x1,X_h)^2 <= Dhat",
                format!("d1_sq = {d1_sq} exceeds Dhat = {dhat}"),
            ));
        }
        let cap = (dhat / 2.0).min((theta * kappa * kappa / 2.0).powf(2.0 * theta) * dhat.powf(2.0 * theta - 1.0));
        if eps > cap {
            return Err(Error::precondition(
                "eps <= min(Dhat/2, (theta*kappa^2/2)^(2 theta) * Dhat^(2 theta - 1))",
                format!("eps = {eps} exceeds the admissible accuracy {cap}"),
            ));
        }
        if theta < 1.0 {
            let cap2 = (kappa * kappa / 4.0).powf(theta / (1.0 - theta));
            if eps > cap2 {
                return Err(Error::precondition(
                    "eps <= (kappa^2/4)^(theta/(1-theta))",
                    format!("eps = {eps} exceeds {cap2}"),
                ));
            }
        } else if kappa < 2.0 {
            return Err(Error::precondition(
                "kappa >= 2 (theta = 1)",
                format!("kappa = {kappa}"),
            ));
        }
        let k = 0.5 * theta * kappa * kappa * dhat.powf(1.0 - 1.0 / (2.0 * theta)) * log_term
            * eps.powf(-1.0 / (2.0 * theta));
        Ok(ceil_guarded(k))
    }
}
