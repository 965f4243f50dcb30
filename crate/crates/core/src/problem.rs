//! Problem instances: subgradient oracle, projection, and optional exact
//! distance instrumentation.

use crate::heb::HebParams;
use crate::linalg;
use crate::{Error, Result};
use std::sync::Arc;

/// `x -> (h(x), g)` with `g` a subgradient of `h` at `x`.
pub type SubgradientOracle = Arc<dyn Fn(&[f64]) -> (f64, Vec<f64>) + Send + Sync>;

/// `x -> P_C(x)`, the nearest feasible point.
pub type ProjectionOracle = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Exact knowledge of the solution set, available on synthetic test
/// problems. `distance` returns `d(x, X_h)`; `optimal_value` is `h*`.
#[derive(Clone)]
pub struct Instrumentation {
    pub distance: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    pub optimal_value: f64,
}

impl Instrumentation {
    /// Squared distance `d(x, X_h)^2`.
    pub fn dist_sq(&self, x: &[f64]) -> f64 {
        let d = (self.distance)(x);
        d * d
    }
}

/// A convex problem `min h(x) over x in C` presented through oracles.
///
/// Oracles are immutable after construction and must be pure functions of
/// their argument, so independent runs may share an instance across threads.
#[derive(Clone)]
pub struct ProblemInstance {
    dim: usize,
    heb: HebParams,
    oracle: SubgradientOracle,
    projection: ProjectionOracle,
    instrumentation: Option<Instrumentation>,
}

impl ProblemInstance {
    pub fn new(
        dim: usize,
        heb: HebParams,
        oracle: SubgradientOracle,
        projection: ProjectionOracle,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        Ok(ProblemInstance { dim, heb, oracle, projection, instrumentation: None })
    }

    /// Attach exact distance instrumentation (builder style).
    pub fn with_instrumentation(
        mut self,
        distance: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
        optimal_value: f64,
    ) -> Self {
        self.instrumentation = Some(Instrumentation { distance, optimal_value });
        self
    }

    /// Replace the claimed growth parameters (e.g. with a more conservative
    /// declaration than the true ones).
    pub fn with_heb(mut self, heb: HebParams) -> Self {
        self.heb = heb;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn heb(&self) -> &HebParams {
        &self.heb
    }

    pub fn instrumentation(&self) -> Option<&Instrumentation> {
        self.instrumentation.as_ref()
    }

    /// Squared distance to the solution set, when instrumented.
    pub fn dist_sq(&self, x: &[f64]) -> Option<f64> {
        self.instrumentation.as_ref().map(|i| i.dist_sq(x))
    }

    /// Raw oracle call, no validation.
    pub fn oracle_raw(&self, x: &[f64]) -> (f64, Vec<f64>) {
        (self.oracle)(x)
    }

    /// Oracle call that rejects non-finite outputs. `eval` is the running
    /// evaluation count, used only to make the error message actionable.
    pub fn evaluate(&self, x: &[f64], eval: u64) -> Result<(f64, Vec<f64>)> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let (value, g) = (self.oracle)(x);
        if !value.is_finite() {
            return Err(Error::OracleFailure { eval, detail: format!("objective value {value}") });
        }
        if g.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: g.len() });
        }
        if !linalg::is_finite(&g) {
            return Err(Error::OracleFailure { eval, detail: "non-finite subgradient entry".into() });
        }
        Ok((value, g))
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        (self.projection)(x)
    }

    /// Shared handle to the projection oracle, for wrappers.
    pub fn projection_oracle(&self) -> ProjectionOracle {
        Arc::clone(&self.projection)
    }

    /// Shared handle to the subgradient oracle, for wrappers.
    pub fn subgradient_oracle(&self) -> SubgradientOracle {
        Arc::clone(&self.oracle)
    }
}

/// Worst violations found while sampling oracle contracts.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleCheck {
    /// max over samples of `‖P(P(x)) - P(x)‖`
    pub idempotence_dev: f64,
    /// max over samples of `‖P(x)-P(y)‖ - ‖x-y‖`
    pub expansion_dev: f64,
    /// max over samples of `h(x) + <g, y-x> - h(y)` (positive = violation)
    pub subgrad_ineq_dev: f64,
    /// max over feasible samples of `‖g‖ - G`
    pub grad_norm_excess: f64,
    /// max over feasible samples of `c d(x)^{1/theta} - (h(x) - h*)`
    pub growth_dev: f64,
}

/// Sample `pairs` random point pairs in the box `[-span, span]^dim` and
/// measure how far the instance strays from its contracts: projection
/// idempotence and nonexpansiveness, the subgradient inequality between
/// projected (feasible) points, the norm bound `‖g‖ <= G` on feasible
/// points, and — when instrumented — the growth inequality itself.
pub fn check_oracle_contracts(problem: &ProblemInstance, pairs: usize, span: f64, seed: u64) -> OracleCheck {
    use crate::problems::random::Rng64;
    let mut rng = Rng64::seed(seed);
    let dim = problem.dim();
    let mut check = OracleCheck::default();
    for _ in 0..pairs {
        let x: Vec<f64> = (0..dim).map(|_| (rng.uniform() * 2.0 - 1.0) * span).collect();
        let y: Vec<f64> = (0..dim).map(|_| (rng.uniform() * 2.0 - 1.0) * span).collect();
        let px = problem.project(&x);
        let py = problem.project(&y);
        let ppx = problem.project(&px);
        check.idempotence_dev = check.idempotence_dev.max(linalg::dist2(&ppx, &px));
        let expansion = linalg::dist2(&px, &py) - linalg::dist2(&x, &y);
        check.expansion_dev = check.expansion_dev.max(expansion);

        let (hx, gx) = problem.oracle_raw(&px);
        let (hy, _) = problem.oracle_raw(&py);
        let mut lin = hx;
        for i in 0..dim {
            lin += gx[i] * (py[i] - px[i]);
        }
        check.subgrad_ineq_dev = check.subgrad_ineq_dev.max(lin - hy);
        check.grad_norm_excess = check.grad_norm_excess.max(linalg::norm2(&gx) - problem.heb().g());

        if let Some(instr) = problem.instrumentation() {
            let d = (instr.distance)(&px);
            let lhs = problem.heb().c() * d.powf(1.0 / problem.heb().theta());
            check.growth_dev = check.growth_dev.max(lhs - (hx - instr.optimal_value));
        }
    }
    check
}
