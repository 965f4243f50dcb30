//! Per-iteration traces and solver reports.

/// One recorded iteration: the state at iterate `x_k` just before the step
/// that uses `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// 1-based iteration index.
    pub k: u64,
    /// Stepsize used to move from `x_k` to `x_{k+1}`.
    pub alpha: f64,
    /// Objective value `h(x_k)`.
    pub obj: f64,
    /// Squared distance `d(x_k, X_h)^2`, when the problem is instrumented.
    pub dist_sq: Option<f64>,
    /// Norm of the subgradient used for the step.
    pub grad_norm: f64,
    /// Cumulative subgradient evaluations up to and including this row.
    pub evals: u64,
}

/// Record of a run. Rows cover the evaluated iterates `x_1 .. x_K`; the
/// final iterate `x_{K+1}` is never evaluated by the oracle, but its squared
/// distance is recorded when instrumentation is available so the distance
/// recursion can be checked across the last step.
#[derive(Debug, Clone, Default)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    /// `d(x_{K+1}, X_h)^2` for the returned iterate, when instrumented.
    pub final_dist_sq: Option<f64>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Squared-distance series `e_k` including the final point, or `None`
    /// if any entry is missing.
    pub fn dist_sq_series(&self) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(self.rows.len() + 1);
        for row in &self.rows {
            out.push(row.dist_sq?);
        }
        out.push(self.final_dist_sq?);
        Some(out)
    }

    /// Largest subgradient norm seen over the run.
    pub fn max_grad_norm(&self) -> f64 {
        self.rows.iter().map(|r| r.grad_norm).fold(0.0, f64::max)
    }

    /// Smallest objective value over the evaluated iterates.
    pub fn best_obj(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.obj).min_by(|a, b| a.total_cmp(b))
    }

    pub(crate) fn push(&mut self, row: TraceRow) {
        debug_assert!(self.rows.last().map_or(true, |last| row.k > last.k), "k must increase");
        debug_assert!(row.alpha >= 0.0);
        self.rows.push(row);
    }
}

/// One constant-stepsize phase of a staircase run. For plain runs the log is
/// empty; for the doubling trick `outer` numbers the restart loop and
/// `c_estimate` records the growth-constant guess in force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    /// Outer loop index (1-based); always 1 for the single-loop scheme.
    pub outer: u32,
    /// Stair index within the outer loop (1-based).
    pub stair: u32,
    /// Planned iteration count of this stair.
    pub steps: u64,
    /// Constant stepsize used during the stair.
    pub alpha: f64,
    /// Growth-constant estimate used to size this stair.
    pub c_estimate: f64,
    /// Cumulative subgradient evaluations before the stair started.
    pub evals_start: u64,
    /// Cumulative subgradient evaluations after the stair finished.
    pub evals_end: u64,
    /// `d(x, X_h)^2` at the stair's final iterate, when instrumented.
    pub end_dist_sq: Option<f64>,
}

/// Mutable state of a running solver: current iterate, 1-based step counter,
/// and the evaluation budget spent so far. The iterate stays feasible; every
/// stored `x` has already been through the projection.
#[derive(Debug, Clone)]
pub struct IterateState {
    pub k: u64,
    pub x: Vec<f64>,
    pub subgrad_evals: u64,
}

/// Output of a solver run.
#[derive(Debug, Clone)]
pub struct SolverReport {
    /// The iterate the method's guarantee speaks about (`x_{K+1}`, or the
    /// last stair/loop output).
    pub final_point: Vec<f64>,
    /// `d(final_point, X_h)^2` when instrumented.
    pub final_dist_sq: Option<f64>,
    /// Evaluated iterate with the smallest objective seen.
    pub best_point: Vec<f64>,
    /// Objective at `best_point`.
    pub best_obj: f64,
    /// Total subgradient-oracle evaluations.
    pub subgrad_evals: u64,
    pub trace: RunTrace,
    /// Stair/loop log for staircase methods; empty otherwise.
    pub phases: Vec<PhaseRecord>,
    /// Non-fatal configuration caveats (e.g. guarantees void but runnable).
    pub warnings: Vec<String>,
}
