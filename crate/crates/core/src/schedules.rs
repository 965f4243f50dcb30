//! Stepsize rules `k -> alpha_k`.
//!
//! Each constructor records which parameter regime produced the rule, so a
//! trace can be matched to the convergence bound that applies to it. All
//! schedules are pure functions of `k` and their parameters.

use crate::heb::HebParams;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A stepsize rule. Iterations are 1-based: `alpha(1)` is the stepsize used
/// for the move from the initial point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepsizeSchedule {
    /// `alpha_k = alpha`.
    Constant { alpha: f64 },
    /// Constant stepsize `2 c eps^(1/(2 theta)) / G^2` targeting squared
    /// distance `2 eps`.
    FixedEpsConstant { alpha: f64, eps: f64 },
    /// `alpha_k = alpha1 k^{-p}` with `p` in (0, 1].
    Polynomial { alpha1: f64, p: f64 },
    /// Polynomial decay with the exponent and coefficient that attain the
    /// fastest rate available from the growth parameters (`theta < 1`).
    OptimalPolynomial { alpha1: f64, p: f64 },
    /// `alpha_k = alpha1 / k` under quadratic growth, `alpha1 <= 1/c`.
    HarmonicQg { alpha1: f64 },
    /// `alpha_k = (2k+1) / (2 c (k+1)^2)` under quadratic growth.
    KarimiQg { c: f64 },
    /// Geometric decay `alpha_k = alpha1 q^{k-1}` for sharp problems: the
    /// unique geometric rule certified by the distance recursion with
    /// contraction `q = sqrt(1 - 1/kappa^2)`.
    ShorGeometric { alpha1: f64, ratio: f64 },
}

/// Parameters of the optimal polynomial decay, kept alongside the schedule
/// so the rate bound can be rebuilt from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalDecayParams {
    /// Decay exponent `p = 1 / (2 (1 - theta))`.
    pub p: f64,
    /// Leading coefficient `(c/G^2) (theta kappa^2 / (1-theta))^p`.
    pub alpha1: f64,
    /// First iteration for which the rate bound is claimed.
    pub k_start: u64,
    /// Constant of the claimed bound `e_k <= rate_constant * k^{-theta/(1-theta)}`.
    pub rate_constant: f64,
}

impl StepsizeSchedule {
    /// Constant stepsize.
    pub fn constant(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
        }
        Ok(StepsizeSchedule::Constant { alpha })
    }

    /// Constant stepsize sized for a target accuracy: `alpha =
    /// 2 c eps^(1/(2 theta)) / G^2`, which places the recursion's noise
    /// floor `e_*` exactly at `eps`.
    pub fn fixed_eps_constant(eps: f64, heb: &HebParams) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::invalid("eps", format!("must be positive, got {eps}")));
        }
        let g = heb.g();
        let alpha = 2.0 * heb.c() * eps.powf(1.0 / (2.0 * heb.theta())) / (g * g);
        Ok(StepsizeSchedule::FixedEpsConstant { alpha, eps })
    }

    /// `alpha_k = alpha1 k^{-p}`, `0 < p <= 1`.
    pub fn polynomial(alpha1: f64, p: f64) -> Result<Self> {
        if !(alpha1 > 0.0 && alpha1.is_finite()) {
            return Err(Error::invalid("alpha1", format!("must be positive, got {alpha1}")));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid("p", format!("must lie in (0, 1], got {p}")));
        }
        Ok(StepsizeSchedule::Polynomial { alpha1, p })
    }

    /// The decay whose exponent matches the best rate the growth parameters
    /// allow: `p = 1/(2(1-theta))`, `alpha1 = (c/G^2)(theta kappa^2/(1-theta))^p`.
    /// Rejects `theta = 1` (use [`StepsizeSchedule::shor_geometric`] there).
    pub fn optimal_polynomial(heb: &HebParams) -> Result<(Self, OptimalDecayParams)> {
        let theta = heb.theta();
        if theta >= 1.0 {
            return Err(Error::invalid(
                "theta",
                "optimal polynomial decay needs theta < 1; use the geometric rule for sharp problems",
            ));
        }
        let p = 1.0 / (2.0 * (1.0 - theta));
        let kappa = heb.kappa();
        let g = heb.g();
        let alpha1 = heb.c() / (g * g) * (theta * kappa * kappa / (1.0 - theta)).powf(p);
        let b = theta / (1.0 - theta);
        let rate_constant = (theta / (1.0 - theta)).powf(b) * kappa.powf(2.0 * b);
        let k_start = if theta >= 0.5 { (2.0 * theta / (1.0 - theta)).ceil() as u64 } else { 2 };
        let params = OptimalDecayParams { p, alpha1, k_start, rate_constant };
        Ok((StepsizeSchedule::OptimalPolynomial { alpha1, p }, params))
    }

    /// Geometric decay for sharp problems (`theta = 1`):
    /// `alpha_k = (sqrt(d1_bound) / (G kappa)) q^{k-1}` with
    /// `q = sqrt(1 - 1/kappa^2)`. With `d1_bound >= d(x_1, X_h)^2` the
    /// recursion certifies `e_k <= d1_bound * q^{2(k-1)}`.
    pub fn shor_geometric(heb: &HebParams, d1_bound: f64) -> Result<Self> {
        if heb.theta() != 1.0 {
            return Err(Error::invalid("theta", "geometric decay requires theta = 1"));
        }
        if !(d1_bound > 0.0 && d1_bound.is_finite()) {
            return Err(Error::invalid("d1_bound", format!("must be positive, got {d1_bound}")));
        }
        let kappa = heb.kappa();
        if kappa < 1.0 {
            return Err(Error::invalid("kappa", format!("G/c must be at least 1, got {kappa}")));
        }
        let ratio = (1.0 - 1.0 / (kappa * kappa)).max(0.0).sqrt();
        let alpha1 = d1_bound.sqrt() / (heb.g() * kappa);
        Ok(StepsizeSchedule::ShorGeometric { alpha1, ratio })
    }

    /// `alpha_k = alpha1 / k` under quadratic growth; requires `alpha1 <= 1/c`.
    pub fn harmonic_qg(alpha1: f64, heb: &HebParams) -> Result<Self> {
        if heb.theta() != 0.5 {
            return Err(Error::invalid("theta", "harmonic rule requires theta = 1/2"));
        }
        if !(alpha1 > 0.0) {
            return Err(Error::invalid("alpha1", format!("must be positive, got {alpha1}")));
        }
        if alpha1 > 1.0 / heb.c() {
            return Err(Error::invalid(
                "alpha1",
                format!("must satisfy alpha1 <= 1/c = {}, got {alpha1}", 1.0 / heb.c()),
            ));
        }
        Ok(StepsizeSchedule::HarmonicQg { alpha1 })
    }

    /// `alpha_k = (2k+1)/(2 c (k+1)^2)` under quadratic growth.
    pub fn karimi_qg(heb: &HebParams) -> Result<Self> {
        if heb.theta() != 0.5 {
            return Err(Error::invalid("theta", "this rule requires theta = 1/2"));
        }
        Ok(StepsizeSchedule::KarimiQg { c: heb.c() })
    }

    /// Stepsize for (1-based) iteration `k`.
    pub fn alpha(&self, k: u64) -> f64 {
        debug_assert!(k >= 1);
        let kf = k as f64;
        match *self {
            StepsizeSchedule::Constant { alpha } | StepsizeSchedule::FixedEpsConstant { alpha, .. } => alpha,
            StepsizeSchedule::Polynomial { alpha1, p } | StepsizeSchedule::OptimalPolynomial { alpha1, p } => {
                alpha1 * kf.powf(-p)
            }
            StepsizeSchedule::HarmonicQg { alpha1 } => alpha1 / kf,
            StepsizeSchedule::KarimiQg { c } => (2.0 * kf + 1.0) / (2.0 * c * (kf + 1.0) * (kf + 1.0)),
            StepsizeSchedule::ShorGeometric { alpha1, ratio } => alpha1 * ratio.powi(k as i32 - 1),
        }
    }

    /// Whether `sum_k alpha_k` diverges.
    pub fn is_nonsummable(&self) -> bool {
        match *self {
            StepsizeSchedule::Constant { .. } | StepsizeSchedule::FixedEpsConstant { .. } => true,
            StepsizeSchedule::Polynomial { p, .. } | StepsizeSchedule::OptimalPolynomial { p, .. } => p <= 1.0,
            StepsizeSchedule::HarmonicQg { .. } | StepsizeSchedule::KarimiQg { .. } => true,
            StepsizeSchedule::ShorGeometric { ratio, .. } => ratio >= 1.0,
        }
    }

    /// Whether `sum_k alpha_k^2` converges.
    pub fn is_square_summable(&self) -> bool {
        match *self {
            StepsizeSchedule::Constant { .. } | StepsizeSchedule::FixedEpsConstant { .. } => false,
            StepsizeSchedule::Polynomial { p, .. } | StepsizeSchedule::OptimalPolynomial { p, .. } => p > 0.5,
            StepsizeSchedule::HarmonicQg { .. } | StepsizeSchedule::KarimiQg { .. } => true,
            StepsizeSchedule::ShorGeometric { ratio, .. } => ratio < 1.0,
        }
    }
}
