//! Hölder error-bound (growth) parameters.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Parameters of the growth condition `h(x) - h* >= c * d(x, X_h)^(1/theta)`
/// on the feasible set, together with a uniform subgradient-norm bound `G`.
///
/// `theta = 1` is the weakly-sharp case, `theta = 1/2` quadratic growth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HebParams {
    c: f64,
    theta: f64,
    g: f64,
}

impl HebParams {
    pub fn new(c: f64, theta: f64, g: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("c", format!("must be positive and finite, got {c}")));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::invalid("theta", format!("must lie in (0, 1], got {theta}")));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::invalid("G", format!("must be positive and finite, got {g}")));
        }
        Ok(HebParams { c, theta, g })
    }

    /// Growth constant `c`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Growth exponent `theta` in (0, 1].
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Uniform subgradient-norm bound `G` on the feasible set.
    pub fn g(&self) -> f64 {
        self.g
    }

    /// Condition measure `kappa = G / c`.
    pub fn kappa(&self) -> f64 {
        self.g / self.c
    }

    /// Recursion exponent `gamma = 1 / (2 theta)`, in `[1/2, inf)`.
    pub fn gamma(&self) -> f64 {
        1.0 / (2.0 * self.theta)
    }

    /// Whether the weakly-sharp case applies (`theta == 1`).
    pub fn is_sharp(&self) -> bool {
        self.theta == 1.0
    }

    /// Effective parameters when the subgradient oracle is perturbed by
    /// deterministic noise of norm at most `r` (weakly-sharp case): the
    /// growth constant drops to `c - r` and the norm bound becomes
    /// `sqrt(2 (G^2 + r^2))`. Returns `None` when `r >= c`, in which case no
    /// guarantee survives.
    pub fn with_noise(&self, r: f64) -> Option<HebParams> {
        if r < 0.0 || r >= self.c {
            return None;
        }
        if r == 0.0 {
            return Some(*self);
        }
        Some(HebParams {
            c: self.c - r,
            theta: self.theta,
            g: (2.0 * (self.g * self.g + r * r)).sqrt(),
        })
    }

    /// Effective parameters for the incremental method over `m` parts, each
    /// with subgradients bounded by this `G`: the squared norm bound in the
    /// distance recursion becomes `m^2 G^2`.
    pub fn incremental(&self, m: usize) -> HebParams {
        HebParams { c: self.c, theta: self.theta, g: self.g * m as f64 }
    }

    /// Parameters certifying the normalized-step recursion for a problem
    /// with Goffin condition measure `mu_h`: growth constant `mu_h`,
    /// `theta = 1`, unit norm bound.
    pub fn normalized(mu_h: f64) -> Result<HebParams> {
        if !(mu_h > 0.0 && mu_h <= 1.0) {
            return Err(Error::invalid("mu_h", format!("must lie in (0, 1], got {mu_h}")));
        }
        HebParams::new(mu_h, 1.0, 1.0)
    }
}
