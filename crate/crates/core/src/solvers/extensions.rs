//! Extension solvers: incremental sweeps over finite sums, bounded
//! deterministic subgradient noise, and normalized steps for problems
//! quantified by the Goffin condition measure.

use super::Driver;
use crate::linalg;
use crate::problem::ProblemInstance;
use crate::problems::random::noise_at_point;
use crate::schedules::StepsizeSchedule;
use crate::trace::{RunTrace, SolverReport, TraceRow};
use crate::{Error, Result};
use std::sync::Arc;

/// Incremental subgradient method for `h = sum_i h_i`: each outer step
/// sweeps the parts in order, `psi_i = P_C(psi_{i-1} - alpha_k g_i)` with
/// `g_i` a subgradient of `h_i` at `psi_{i-1}`.
///
/// The first part supplies the shared projection and, when present, the
/// distance instrumentation for the sum. The recorded objective per outer
/// step is the sum of part values along the sweep (exact at `m = 1`), and
/// the recorded subgradient norm is the largest per-part norm seen. The
/// distance recursion for these traces holds with `G^2` replaced by
/// `m^2 G^2` (see [`crate::HebParams::incremental`]).
pub fn incremental_sg(
    parts: &[ProblemInstance],
    schedule: &StepsizeSchedule,
    k_steps: u64,
    x1: &[f64],
) -> Result<SolverReport> {
    let first = parts.first().ok_or_else(|| Error::invalid("parts", "empty part list"))?;
    if parts.iter().any(|p| p.dim() != first.dim()) {
        return Err(Error::DimensionMismatch { expected: first.dim(), got: 0 });
    }
    if k_steps == 0 {
        return Err(Error::invalid("k_steps", "must be at least 1"));
    }
    if x1.len() != first.dim() {
        return Err(Error::DimensionMismatch { expected: first.dim(), got: x1.len() });
    }
    let mut x = first.project(x1);
    let mut trace = RunTrace::default();
    let mut evals = 0u64;
    let mut best_obj = f64::INFINITY;
    let mut best_point = x.clone();
    for k in 1..=k_steps {
        let alpha = schedule.alpha(k);
        let dist_sq = first.dist_sq(&x);
        let mut sweep = x.clone();
        let mut value_sum = 0.0;
        let mut max_grad_norm = 0.0f64;
        for part in parts {
            let (value, g) = part.evaluate(&sweep, evals + 1)?;
            evals += 1;
            value_sum += value;
            max_grad_norm = max_grad_norm.max(linalg::norm2(&g));
            linalg::axpy(-alpha, &g, &mut sweep);
            sweep = first.project(&sweep);
        }
        if value_sum < best_obj {
            best_obj = value_sum;
            best_point.clone_from(&x);
        }
        trace.push(TraceRow { k, alpha, obj: value_sum, dist_sq, grad_norm: max_grad_norm, evals });
        x = sweep;
    }
    trace.final_dist_sq = first.dist_sq(&x);
    Ok(SolverReport {
        final_dist_sq: trace.final_dist_sq,
        final_point: x,
        best_point,
        best_obj,
        subgrad_evals: evals,
        trace,
        phases: Vec::new(),
        warnings: Vec::new(),
    })
}

/// Wrap a problem so every subgradient call is perturbed by a deterministic
/// vector of norm exactly `radius` whose direction depends only on
/// `(seed, x)`; the oracle stays pure, so runs remain reproducible.
///
/// In the sharp case with `radius < c`, downstream guarantees survive with
/// `c` replaced by `c - radius` and `G^2` by `2 (G^2 + radius^2)`; the
/// wrapper carries those effective parameters. With `radius >= c` no
/// guarantee survives: the wrapper still runs but keeps the original claim.
pub fn noisy_oracle(problem: &ProblemInstance, radius: f64, seed: u64) -> Result<ProblemInstance> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::invalid("radius", format!("must be nonnegative, got {radius}")));
    }
    let inner = problem.subgradient_oracle();
    let noisy: crate::problem::SubgradientOracle = Arc::new(move |x: &[f64]| {
        let (value, mut g) = inner(x);
        let noise = noise_at_point(seed, x, radius);
        for (gi, ni) in g.iter_mut().zip(&noise) {
            *gi += ni;
        }
        (value, g)
    });
    let effective = problem.heb().with_noise(radius).unwrap_or(*problem.heb());
    let mut wrapped =
        ProblemInstance::new(problem.dim(), effective, noisy, problem.projection_oracle())?;
    if let Some(instr) = problem.instrumentation() {
        wrapped = wrapped.with_instrumentation(Arc::clone(&instr.distance), instr.optimal_value);
    }
    Ok(wrapped)
}

/// Normalized subgradient method `x_{k+1} = P_C(x_k - alpha_k g_k/||g_k||)`.
///
/// For problems with Goffin condition measure `mu_h > 0` the distance
/// recursion holds with `c = mu_h`, `G = 1`, `theta = 1` (see
/// [`crate::HebParams::normalized`]); the recorded subgradient norm is that
/// of the unit step direction. A zero subgradient at a point the
/// instrumentation can certify as non-optimal is an oracle contract breach;
/// without instrumentation a zero subgradient is taken as proof of
/// optimality and the iterate stays put.
pub fn normalized_sg(
    problem: &ProblemInstance,
    mu_h: f64,
    schedule: &StepsizeSchedule,
    k_steps: u64,
    x1: &[f64],
) -> Result<SolverReport> {
    if !(mu_h > 0.0 && mu_h <= 1.0) {
        return Err(Error::invalid("mu_h", format!("must lie in (0, 1], got {mu_h}")));
    }
    if k_steps == 0 {
        return Err(Error::invalid("k_steps", "must be at least 1"));
    }
    let mut driver = Driver::new(problem, x1)?;
    for k in 1..=k_steps {
        let (value, mut g) = driver.evaluate_here()?;
        let norm = linalg::norm2(&g);
        if norm > 0.0 {
            for gi in &mut g {
                *gi /= norm;
            }
        } else if let Some(d_sq) = problem.dist_sq(driver.current_point()) {
            if d_sq > 1e-12 {
                return Err(Error::OracleContract(format!(
                    "zero subgradient at a non-optimal point (d^2 = {d_sq:.3e}) at step {k}"
                )));
            }
        }
        let dir_norm = if norm > 0.0 { 1.0 } else { 0.0 };
        driver.advance(schedule.alpha(k), value, &g, dir_norm);
    }
    Ok(driver.finish(Vec::new()))
}
