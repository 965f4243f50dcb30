//! Descending-stairs restart schemes: a fixed-stepsize phase whose stepsize
//! shrinks by `beta^{-1/(2 theta)}` and whose length grows by
//! `beta^{(1-theta)/theta}` at each stair, plus the doubling-trick outer
//! loop that halves the growth-constant estimate when it is unknown.

use super::{ceil_guarded, Driver};
use crate::heb::HebParams;
use crate::problem::ProblemInstance;
use crate::trace::{PhaseRecord, SolverReport};
use crate::{Error, Result};
use std::sync::Arc;

/// Configuration of the single-loop staircase run.
#[derive(Debug, Clone, Copy)]
pub struct DsSgConfig {
    /// Growth parameters; `c` may be a conservative lower bound.
    pub heb: HebParams,
    /// Stair shrink factor, > 1.
    pub beta: f64,
    /// Upper bound on `d(x_init, X_h)^2`.
    pub omega1: f64,
    /// Target squared distance.
    pub eps: f64,
    /// Number of stairs `M`.
    pub stairs: u32,
}

impl DsSgConfig {
    /// Build a configuration with the minimal stair count
    /// `M = ceil(ln(omega1/eps) / ln(beta))`.
    pub fn new(heb: HebParams, beta: f64, omega1: f64, eps: f64) -> Result<Self> {
        let stairs = Self::min_stairs(beta, omega1, eps)?;
        let cfg = DsSgConfig { heb, beta, omega1, eps, stairs };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Minimal stair count reaching the target.
    pub fn min_stairs(beta: f64, omega1: f64, eps: f64) -> Result<u32> {
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(Error::invalid("beta", format!("must exceed 1, got {beta}")));
        }
        if !(omega1 > 0.0 && eps > 0.0 && eps.is_finite() && omega1.is_finite()) {
            return Err(Error::invalid("omega1/eps", "must be positive and finite"));
        }
        Ok(ceil_guarded((omega1 / eps).ln() / beta.ln()).max(1) as u32)
    }

    /// Lower bound that `beta` must satisfy when `theta < 1`.
    pub fn beta_lower_bound(heb: &HebParams, omega1: f64) -> f64 {
        let theta = heb.theta();
        let kappa = heb.kappa();
        let first = 0.5 * (kappa * kappa / 4.0).powf(theta / (theta - 1.0)) * omega1;
        let second = theta.powf(-2.0 * theta) * kappa.powf(-4.0 * theta) * omega1.powf(2.0 * (1.0 - theta));
        first.max(second)
    }

    pub fn validate(&self) -> Result<()> {
        let theta = self.heb.theta();
        if !(0.5..=1.0).contains(&theta) {
            return Err(Error::precondition(
                "1/2 <= theta <= 1",
                format!("staircase scheme needs theta in [1/2, 1], got {theta}"),
            ));
        }
        if !(self.beta > 1.0 && self.beta.is_finite()) {
            return Err(Error::invalid("beta", format!("must exceed 1, got {}", self.beta)));
        }
        if !(self.omega1 > 0.0 && self.omega1.is_finite()) {
            return Err(Error::invalid("omega1", "must be positive and finite"));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::invalid("eps", "must be positive and finite"));
        }
        let min_stairs = Self::min_stairs(self.beta, self.omega1, self.eps)?;
        if self.stairs < min_stairs {
            return Err(Error::precondition(
                "M >= ceil(ln(omega1/eps)/ln(beta))",
                format!("M = {} but at least {min_stairs} stairs are needed", self.stairs),
            ));
        }
        if theta < 1.0 {
            let bound = Self::beta_lower_bound(&self.heb, self.omega1);
            if self.beta < bound {
                return Err(Error::precondition(
                    "beta >= max(0.5 (kappa^2/4)^(theta/(theta-1)) omega1, theta^(-2 theta) kappa^(-4 theta) omega1^(2(1-theta)))",
                    format!("beta = {} below the admissible lower bound {bound}", self.beta),
                ));
            }
        } else if self.heb.kappa() < 2.0 {
            return Err(Error::precondition(
                "kappa >= 2 (theta = 1)",
                format!("kappa = {}", self.heb.kappa()),
            ));
        }
        Ok(())
    }

    /// Initial stair length before rounding:
    /// `theta kappa^2 beta^{1/(2 theta)} ln(2 beta) omega1^{1 - 1/theta}`.
    pub fn initial_stair_len(&self) -> f64 {
        let theta = self.heb.theta();
        let kappa = self.heb.kappa();
        theta
            * kappa
            * kappa
            * self.beta.powf(1.0 / (2.0 * theta))
            * (2.0 * self.beta).ln()
            * self.omega1.powf(1.0 - 1.0 / theta)
    }

    /// Initial stair stepsize `(2c/G^2) (omega1 / (2 beta))^{1/(2 theta)}`.
    pub fn initial_alpha(&self) -> f64 {
        let g = self.heb.g();
        2.0 * self.heb.c() / (g * g) * (self.omega1 / (2.0 * self.beta)).powf(1.0 / (2.0 * self.heb.theta()))
    }

    /// Largest stair count whose cumulative step total stays within
    /// `eval_budget` (at least 1). Running with more stairs than the
    /// minimal count tightens the reached tolerance, since each stair
    /// keeps shrinking the stepsize by the same factor.
    pub fn stairs_within_budget(heb: &HebParams, beta: f64, omega1: f64, eval_budget: u64) -> u32 {
        let theta = heb.theta();
        let kappa = heb.kappa();
        let k_tilde_1 = theta
            * kappa
            * kappa
            * beta.powf(1.0 / (2.0 * theta))
            * (2.0 * beta).ln()
            * omega1.powf(1.0 - 1.0 / theta);
        let growth = (1.0 - theta) / theta;
        let mut total = 0u64;
        let mut m = 0u32;
        loop {
            let steps = ceil_guarded(beta.powf(m as f64 * growth) * k_tilde_1).max(1);
            if m >= 1 && total + steps > eval_budget {
                return m;
            }
            total += steps;
            m += 1;
            if total >= eval_budget {
                return m;
            }
        }
    }
}

/// Run `cfg.stairs` stairs on an existing driver. Factored out so the
/// doubling-trick loop can chain stair blocks without re-validating against
/// the strict single-loop rules.
fn run_stairs(
    driver: &mut Driver,
    cfg: &DsSgConfig,
    outer: u32,
    phases: &mut Vec<PhaseRecord>,
) -> Result<()> {
    let theta = cfg.heb.theta();
    let k_tilde_1 = cfg.initial_stair_len();
    let mut alpha = cfg.initial_alpha();
    let shrink = cfg.beta.powf(-1.0 / (2.0 * theta));
    let growth_exp = (1.0 - theta) / theta;
    for m in 1..=cfg.stairs {
        let steps = ceil_guarded(cfg.beta.powf((m - 1) as f64 * growth_exp) * k_tilde_1).max(1);
        let evals_start = driver.subgrad_evals();
        driver.run_constant(steps, alpha)?;
        phases.push(PhaseRecord {
            outer,
            stair: m,
            steps,
            alpha,
            c_estimate: cfg.heb.c(),
            evals_start,
            evals_end: driver.subgrad_evals(),
            end_dist_sq: driver.current_dist_sq(),
        });
        alpha *= shrink;
    }
    Ok(())
}

/// Descending-stairs subgradient method for `theta` in `[1/2, 1]`: chains
/// `M` fixed-stepsize phases, each shrinking the stepsize by
/// `beta^{-1/(2 theta)}` and growing the length by `beta^{(1-theta)/theta}`,
/// and returns the final stair output, for which
/// `d(x, X_h)^2 <= beta^{-M} omega1 <= eps`.
pub fn ds_sg(problem: &ProblemInstance, cfg: &DsSgConfig, x_init: &[f64]) -> Result<SolverReport> {
    cfg.validate()?;
    if let Some(instr) = problem.instrumentation() {
        let d_sq = instr.dist_sq(x_init);
        if d_sq > cfg.omega1 * (1.0 + 1e-9) {
            return Err(Error::precondition(
                "omega1 >= d(x_init, X_h)^2",
                format!("omega1 = {} but the initial squared distance is {d_sq}", cfg.omega1),
            ));
        }
    }
    let mut driver = Driver::new(problem, x_init)?;
    let mut phases = Vec::with_capacity(cfg.stairs as usize);
    run_stairs(&mut driver, cfg, 1, &mut phases)?;
    Ok(driver.finish(phases))
}

/// Progress snapshot passed to external stopping callbacks after each outer
/// loop of the doubling trick.
#[derive(Debug, Clone, Copy)]
pub struct Ds2Progress {
    pub outer_loops_done: u32,
    pub subgrad_evals: u64,
    pub best_obj: f64,
    /// Estimate used during the loop that just finished.
    pub c_estimate: f64,
}

/// Stopping policy for the doubling-trick loop, which has no intrinsic
/// stopping rule.
#[derive(Clone)]
pub enum Ds2Stopping {
    /// Run exactly this many outer loops.
    MaxOuterLoops(u32),
    /// Stop once `c_l^{-theta} (best_obj - h_lb)^theta <= sqrt(eps)`, which
    /// certifies `d^2 <= eps` through the growth inequality when `h_lb` is a
    /// valid lower bound on the optimal value.
    ObjectiveGap { h_lb: f64 },
    /// Stop when the callback returns true.
    External(Arc<dyn Fn(&Ds2Progress) -> bool + Send + Sync>),
}

impl std::fmt::Debug for Ds2Stopping {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ds2Stopping::MaxOuterLoops(n) => write!(f, "MaxOuterLoops({n})"),
            Ds2Stopping::ObjectiveGap { h_lb } => write!(f, "ObjectiveGap {{ h_lb: {h_lb} }}"),
            Ds2Stopping::External(_) => write!(f, "External(..)"),
        }
    }
}

/// Configuration of the doubling-trick staircase for unknown growth
/// constant.
#[derive(Debug, Clone)]
pub struct Ds2SgConfig {
    /// Initial growth-constant guess, halved at each outer loop.
    pub c1: f64,
    pub theta: f64,
    /// Subgradient-norm bound.
    pub g: f64,
    pub beta: f64,
    /// Squared diameter of the (bounded) feasible set.
    pub omega_c: f64,
    /// Per-loop target squared distance.
    pub eps: f64,
    /// Stairs per inner staircase block.
    pub stairs: u32,
    pub stopping: Ds2Stopping,
}

impl Ds2SgConfig {
    /// Configuration with the minimal per-loop stair count and the default
    /// fixed outer budget.
    pub fn new(c1: f64, theta: f64, g: f64, beta: f64, omega_c: f64, eps: f64, stopping: Ds2Stopping) -> Result<Self> {
        let stairs = DsSgConfig::min_stairs(beta, omega_c, eps)?;
        let cfg = Ds2SgConfig { c1, theta, g, beta, omega_c, eps, stairs, stopping };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Safe initial estimate: `G omega_c^{1/2 - 1/(2 theta)}` for
    /// `theta < 1`, and `G/2` in the sharp case (where `G` itself would make
    /// `kappa_1 = 1`, below the admissible 2).
    pub fn default_c1(theta: f64, g: f64, omega_c: f64) -> f64 {
        if theta >= 1.0 {
            g / 2.0
        } else {
            g * omega_c.powf(0.5 - 1.0 / (2.0 * theta))
        }
    }

    /// Hard errors only; soft caveats (sharp case with `kappa_1 < 2`) are
    /// reported as run warnings instead because the halving repairs them
    /// after one loop.
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return Err(Error::precondition(
                "bounded feasible set",
                format!("the doubling trick needs a finite squared diameter, got {}", self.omega_c),
            ));
        }
        if !(0.5..=1.0).contains(&self.theta) {
            return Err(Error::precondition(
                "1/2 <= theta <= 1",
                format!("got theta = {}", self.theta),
            ));
        }
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::invalid("c1", format!("must be positive, got {}", self.c1)));
        }
        if !(self.beta > 1.0 && self.beta.is_finite()) {
            return Err(Error::invalid("beta", format!("must exceed 1, got {}", self.beta)));
        }
        let min_stairs = DsSgConfig::min_stairs(self.beta, self.omega_c, self.eps)?;
        if self.stairs < min_stairs {
            return Err(Error::precondition(
                "M >= ceil(ln(omega_c/eps)/ln(beta))",
                format!("M = {} but at least {min_stairs} stairs are needed", self.stairs),
            ));
        }
        if self.theta < 1.0 {
            let heb1 = HebParams::new(self.c1, self.theta, self.g)?;
            let bound = DsSgConfig::beta_lower_bound(&heb1, self.omega_c);
            if self.beta < bound {
                return Err(Error::precondition(
                    "beta >= max(0.5 (kappa1^2/4)^(theta/(theta-1)) omega_c, theta^(-2 theta) kappa1^(-4 theta) omega_c^(2(1-theta)))",
                    format!("beta = {} below the admissible lower bound {bound}", self.beta),
                ));
            }
        }
        Ok(())
    }

    /// Outer loops after which the target is certified, given the true
    /// growth constant: `max(0, ceil(log2(c1/c))) + 1`.
    pub fn certified_outer_loops(&self, true_c: f64) -> u32 {
        let ratio = (self.c1 / true_c).log2();
        ceil_guarded(ratio.max(0.0)) as u32 + 1
    }
}

/// Doubling-trick staircase: repeats the staircase block with the
/// growth-constant estimate halved each outer loop, chaining iterates, and
/// tracks the best objective seen. Once the estimate drops to or below the
/// true constant, each further loop output satisfies the target.
pub fn ds2_sg(problem: &ProblemInstance, cfg: &Ds2SgConfig, x_init: &[f64]) -> Result<SolverReport> {
    cfg.validate()?;
    if let Some(instr) = problem.instrumentation() {
        let d_sq = instr.dist_sq(x_init);
        if d_sq > cfg.omega_c * (1.0 + 1e-9) {
            return Err(Error::precondition(
                "omega_c >= d(x_init, X_h)^2",
                format!("omega_c = {} but the initial squared distance is {d_sq}", cfg.omega_c),
            ));
        }
    }
    let mut driver = Driver::new(problem, x_init)?;
    if cfg.theta == 1.0 && cfg.g / cfg.c1 < 2.0 {
        driver.push_warning(format!(
            "kappa_1 = {} < 2: the first {} loop(s) carry no guarantee until the halved estimate reaches G/2",
            cfg.g / cfg.c1,
            (2.0 * cfg.c1 / cfg.g).log2().ceil().max(1.0)
        ));
    }
    let mut phases = Vec::new();
    let mut c_l = cfg.c1;
    let mut outer = 0u32;
    loop {
        outer += 1;
        let heb_l = HebParams::new(c_l, cfg.theta, cfg.g)?;
        let inner = DsSgConfig {
            heb: heb_l,
            beta: cfg.beta,
            omega1: cfg.omega_c,
            eps: cfg.eps,
            stairs: cfg.stairs,
        };
        run_stairs(&mut driver, &inner, outer, &mut phases)?;
        let progress = Ds2Progress {
            outer_loops_done: outer,
            subgrad_evals: driver.subgrad_evals(),
            best_obj: driver.best_obj(),
            c_estimate: c_l,
        };
        let stop = match &cfg.stopping {
            Ds2Stopping::MaxOuterLoops(n) => outer >= *n,
            Ds2Stopping::ObjectiveGap { h_lb } => {
                let gap = (progress.best_obj - h_lb).max(0.0);
                c_l.powf(-cfg.theta) * gap.powf(cfg.theta) <= cfg.eps.sqrt()
            }
            Ds2Stopping::External(f) => f(&progress),
        };
        if stop {
            break;
        }
        c_l /= 2.0;
    }
    Ok(driver.finish(phases))
}
