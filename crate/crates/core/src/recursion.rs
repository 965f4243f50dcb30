//! The projected subgradient step and the squared-distance recursion that
//! certifies every convergence bound in this crate.

use crate::heb::HebParams;
use crate::linalg;
use crate::problem::ProblemInstance;
use crate::trace::RunTrace;
use crate::{Error, Result};

/// One projected subgradient step `P_C(x - alpha g)` for the oracle's choice
/// of `g` at `x`. Returns the new point along with `h(x)` and `g`.
pub fn projected_subgradient_step(
    x: &[f64],
    alpha: f64,
    problem: &ProblemInstance,
) -> Result<(Vec<f64>, f64, Vec<f64>)> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let (value, g) = problem.evaluate(x, 0)?;
    let mut raw = x.to_vec();
    linalg::axpy(-alpha, &g, &mut raw);
    Ok((problem.project(&raw), value, g))
}

/// Upper bound on `e_{k+1}` given `e_k`, from the distance recursion
/// `0 <= e_{k+1} <= e_k - 2 alpha c e_k^gamma + alpha^2 G^2`. The clamp at
/// zero mirrors the left inequality. Total over `e_k >= 0`.
pub fn recursion_bound(e_k: f64, alpha: f64, heb: &HebParams) -> f64 {
    let e = e_k.max(0.0);
    let g = heb.g();
    let raw = e - 2.0 * alpha * heb.c() * e.powf(heb.gamma()) + alpha * alpha * g * g;
    raw.max(0.0)
}

/// Outcome of checking a trace against the distance recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionCheck {
    pub ok: bool,
    /// Index `k` of the first step whose successor violates the bound.
    pub first_violation: Option<u64>,
    /// `e_{k+1} - bound` at the first violation.
    pub excess: f64,
    pub pairs_checked: usize,
}

/// Check `e_{k+1} <= recursion_bound(e_k, alpha_k) + tol (1 + e_k)` for
/// every consecutive pair of an instrumented trace. `tol` is a relative
/// tolerance scale; pass `0.0` for an exact check.
pub fn verify_key_recursion(trace: &RunTrace, heb: &HebParams, tol: f64) -> Result<RecursionCheck> {
    let series = trace.dist_sq_series().ok_or_else(|| {
        Error::MissingInstrumentation("verify_key_recursion needs d(x,X_h)^2 on every row".into())
    })?;
    if trace.rows.is_empty() {
        return Err(Error::invalid("trace", "empty trace"));
    }
    let mut pairs = 0usize;
    for (i, row) in trace.rows.iter().enumerate() {
        let e_k = series[i];
        let e_next = series[i + 1];
        let bound = recursion_bound(e_k, row.alpha, heb);
        let slack = tol * (1.0 + e_k);
        pairs += 1;
        if e_next > bound + slack {
            return Ok(RecursionCheck {
                ok: false,
                first_violation: Some(row.k),
                excess: e_next - bound,
                pairs_checked: pairs,
            });
        }
    }
    Ok(RecursionCheck { ok: true, first_violation: None, excess: 0.0, pairs_checked: pairs })
}
