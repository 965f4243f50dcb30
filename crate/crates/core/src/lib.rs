//! Projected subgradient methods for convex functions with Hölderian growth.
//!
//! The library is organized around a single iteration,
//! `x_{k+1} = P_C(x_k - alpha_k * g_k)`, and the recursion it induces on the
//! squared distance `e_k = d(x_k, X_h)^2` when the objective satisfies a
//! Hölder error bound `h(x) - h* >= c * d(x, X_h)^(1/theta)`:
//!
//! ```text
//! 0 <= e_{k+1} <= e_k - 2 alpha_k c e_k^gamma + alpha_k^2 G^2,   gamma = 1/(2 theta)
//! ```
//!
//! Everything else builds on that recursion:
//!
//! - [`schedules`]: stepsize rules (constant, polynomial, geometric, and the
//!   accuracy-targeted variants derived from the growth parameters),
//! - [`solvers`]: the drivers (fixed-step, generic schedule, descending-stairs
//!   restarts, the doubling trick for unknown `c`, plus incremental, noisy,
//!   and normalized-step variants),
//! - [`problems`]: instrumented test problems with known growth parameters
//!   (power growth, l1-norm over a box, least absolute deviations, hinge-loss
//!   SVM) and the projection operators they need,
//! - [`baselines`]: restarted averaged subgradient baselines for benchmark
//!   comparisons,
//! - [`analysis`]: closed-form convergence bounds matching each stepsize
//!   regime and empirical rate fitting, so runs can be checked against the
//!   guarantees at test time.

pub mod analysis;
pub mod baselines;
pub mod datasets;
pub mod error;
pub mod heb;
pub mod linalg;
pub mod problem;
pub mod problems;
pub mod recursion;
pub mod schedules;
pub mod solvers;
pub mod trace;

pub use error::Error;
pub use heb::HebParams;
pub use problem::{Instrumentation, ProblemInstance};
pub use recursion::{projected_subgradient_step, recursion_bound, verify_key_recursion, RecursionCheck};
pub use schedules::StepsizeSchedule;
pub use trace::{RunTrace, SolverReport, TraceRow};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
