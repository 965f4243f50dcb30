//! Closed-form convergence bounds for each stepsize regime, evaluation-count
//! budgets for the staircase schemes, and empirical rate fitting.
//!
//! Each calculator validates the conditions its guarantee needs and returns
//! a [`RateBound`] that can be checked pointwise against an instrumented
//! run.

use crate::heb::HebParams;
use crate::solvers::{Ds2SgConfig, DsSgConfig};
use crate::trace::RunTrace;
use crate::{Error, Result};

/// Which guarantee a bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Constant stepsize, linear phase down to the noise floor (geometric
    /// decay plus floor).
    FixedLinearPhase,
    /// Constant stepsize for `theta >= 1/2`: floor plus the max of the
    /// geometric term and `alpha^2 G^2`.
    FixedLinearPhaseMax,
    /// Optimal polynomial decay `O(k^{theta/(theta-1)})`.
    OptimalDecay,
    /// Generic polynomial decay for `theta in [1/2, 1]`: `O(k^{-2 p theta})`.
    DecayingGeneral,
    /// Polynomial decay for `theta < 1/2`: max of two power laws.
    DecayingLowTheta,
    /// Optimal-exponent corollary for `theta < 1/2`.
    DecayingLowThetaOptimalP,
    /// Harmonic stepsize under quadratic growth: `O(k^{-c alpha1})`.
    HarmonicQg,
    /// The `(2k+1)/(2c(k+1)^2)` stepsize under quadratic growth.
    KarimiQg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    /// `floor + coeff * ratio^{k-1}`
    GeometricFloor { floor: f64, coeff: f64, ratio: f64 },
    /// `floor + max(coeff * ratio^{k-1}, cap)`
    GeometricFloorMax { floor: f64, coeff: f64, ratio: f64, cap: f64 },
    /// `coeff * k^{exponent}`
    Power { coeff: f64, exponent: f64 },
    /// `coeff * max(k^{e1}, k^{e2})`
    MaxPower { coeff: f64, e1: f64, e2: f64 },
    /// `a/(k+1)^2 + b/(k+1)`
    TwoTerm { a: f64, b: f64 },
}

/// A pointwise upper bound on the squared distance to the solution set.
/// `bound(k)` dominates `e_{k + index_offset}` for all `k >= k_start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBound {
    pub kind: BoundKind,
    pub k_start: u64,
    /// 0 for bounds on `e_k`, 1 for bounds stated on the next iterate.
    pub index_offset: u64,
    form: Form,
}

impl RateBound {
    pub fn bound(&self, k: u64) -> f64 {
        let kf = k as f64;
        match self.form {
            Form::GeometricFloor { floor, coeff, ratio } => floor + coeff * ratio.powi(k as i32 - 1),
            Form::GeometricFloorMax { floor, coeff, ratio, cap } => {
                floor + (coeff * ratio.powi(k as i32 - 1)).max(cap)
            }
            Form::Power { coeff, exponent } => coeff * kf.powf(exponent),
            Form::MaxPower { coeff, e1, e2 } => coeff * kf.powf(e1).max(kf.powf(e2)),
            Form::TwoTerm { a, b } => a / ((kf + 1.0) * (kf + 1.0)) + b / (kf + 1.0),
        }
    }

    /// First `k` in the validity range where `series` (the values
    /// `e_1, e_2, ...`) exceeds the bound beyond a relative slack, together
    /// with the excess. `None` means the bound dominates the series.
    pub fn first_violation(&self, series: &[f64], rel_slack: f64) -> Option<(u64, f64)> {
        let mut k = self.k_start;
        loop {
            let idx = (k + self.index_offset) as usize - 1;
            if idx >= series.len() {
                return None;
            }
            let b = self.bound(k);
            let e = series[idx];
            if e > b + rel_slack * (1.0 + b) {
                return Some((k, e - b));
            }
            k += 1;
        }
    }
}

/// Constant-stepsize guarantee: noise floor `e_* = (alpha G^2 / (2c))^{2
/// theta}`, contraction factor, and the matching pointwise bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedStepBound {
    pub e_star: f64,
    /// Contraction factor per step of the linear phase.
    pub q: f64,
    /// Squared-distance bound used for the `theta >= 1/2` branch.
    pub d_cap: Option<f64>,
    pub rate: RateBound,
}

/// Bound for a constant-stepsize run started at squared distance `d1_sq`.
///
/// For `theta <= 1/2` the stepsize must satisfy
/// `alpha <= 2^{(1-2 theta)/(2(1-theta))} theta^{1/(2(1-theta))}
/// G^{(2 theta-1)/(1-theta)} c^{theta/(theta-1)}`; the bound is
/// `e_* + q1^{k-1} (e_1 - e_*)`.
///
/// For `theta > 1/2` a bound `D` on the squared distances is needed
/// (defaulted to `max(d1_sq, e_* + alpha^2 G^2)`, which the boundedness
/// guarantee supplies) along with `alpha <= theta D^{1-1/(2 theta)} / c`;
/// the bound is `e_* + max(q2^{k-1}(e_1 - e_*), alpha^2 G^2)`.
pub fn fixed_bound(alpha: f64, heb: &HebParams, d1_sq: f64, d: Option<f64>) -> Result<FixedStepBound> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let theta = heb.theta();
    let c = heb.c();
    let g = heb.g();
    let e_star = (alpha * g * g / (2.0 * c)).powf(2.0 * theta);
    if theta <= 0.5 {
        let cap = 2f64.powf((1.0 - 2.0 * theta) / (2.0 * (1.0 - theta)))
            * theta.powf(1.0 / (2.0 * (1.0 - theta)))
            * g.powf((2.0 * theta - 1.0) / (1.0 - theta))
            * c.powf(theta / (theta - 1.0));
        if alpha > cap * (1.0 + 1e-12) {
            return Err(Error::precondition(
                "alpha <= 2^((1-2 theta)/(2(1-theta))) theta^(1/(2(1-theta))) G^((2 theta-1)/(1-theta)) c^(theta/(theta-1))",
                format!("alpha = {alpha} exceeds the admissible stepsize {cap}"),
            ));
        }
        let q = (1.0 - alpha * c / theta * e_star.powf((1.0 - 2.0 * theta) / (2.0 * theta))).max(0.0);
        Ok(FixedStepBound {
            e_star,
            q,
            d_cap: None,
            rate: RateBound {
                kind: BoundKind::FixedLinearPhase,
                k_start: 1,
                index_offset: 0,
                form: Form::GeometricFloor { floor: e_star, coeff: d1_sq - e_star, ratio: q },
            },
        })
    } else {
        let d_cap = d.unwrap_or_else(|| d1_sq.max(e_star + alpha * alpha * g * g));
        let cap = theta * d_cap.powf(1.0 - 1.0 / (2.0 * theta)) / c;
        if alpha > cap * (1.0 + 1e-12) {
            return Err(Error::precondition(
                "alpha <= theta D^(1-1/(2 theta)) / c",
                format!("alpha = {alpha} exceeds the admissible stepsize {cap} for D = {d_cap}"),
            ));
        }
        let q = (1.0 - alpha * c / theta * d_cap.powf(1.0 / (2.0 * theta) - 1.0)).max(0.0);
        Ok(FixedStepBound {
            e_star,
            q,
            d_cap: Some(d_cap),
            rate: RateBound {
                kind: BoundKind::FixedLinearPhaseMax,
                k_start: 1,
                index_offset: 0,
                form: Form::GeometricFloorMax {
                    floor: e_star,
                    coeff: d1_sq - e_star,
                    ratio: q,
                    cap: alpha * alpha * g * g,
                },
            },
        })
    }
}

/// Closed-form budget on the subgradient evaluations of the staircase run.
pub fn dssg_eval_bound(cfg: &DsSgConfig) -> f64 {
    let theta = cfg.heb.theta();
    let kappa = cfg.heb.kappa();
    let beta = cfg.beta;
    let log_ratio = (cfg.omega1 / cfg.eps).ln() / beta.ln();
    if theta == 1.0 {
        (beta.sqrt() * kappa * kappa * (2.0 * beta).ln() + 1.0) * (log_ratio + 1.0)
    } else {
        theta * beta.powf(3.0 / (2.0 * theta) - 1.0) * (2.0 * beta).ln()
            / (beta.powf(1.0 / theta - 1.0) - 1.0)
            * kappa
            * kappa
            * cfg.eps.powf(1.0 - 1.0 / theta)
            + log_ratio
            + 1.0
    }
}

/// Closed-form budget for the doubling-trick scheme, given the true growth
/// constant (`kappa_bar = max(kappa, kappa_1)`).
pub fn ds2sg_eval_bound(cfg: &Ds2SgConfig, true_c: f64) -> f64 {
    let theta = cfg.theta;
    let beta = cfg.beta;
    let kappa = cfg.g / true_c;
    let kappa1 = cfg.g / cfg.c1;
    let kappa_bar = kappa.max(kappa1);
    let log_ratio = (cfg.omega_c / cfg.eps).ln() / beta.ln();
    if theta == 1.0 {
        4.0 / 3.0
            * (beta.sqrt() * kappa_bar * kappa_bar * (2.0 * beta).ln()
                + (kappa_bar / kappa1).powi(2)
                + (kappa_bar / kappa1).log2()
                + 1.0)
            * (log_ratio + 1.0)
    } else {
        4.0 * theta * beta.powf(3.0 / (2.0 * theta) - 1.0) * (2.0 * beta).ln()
            / (3.0 * (beta.powf(1.0 / theta - 1.0) - 1.0))
            * kappa_bar
            * kappa_bar
            * cfg.eps.powf(1.0 - 1.0 / theta)
            + (4.0 * (kappa_bar / kappa1).powi(2) / 3.0 + (kappa_bar / kappa1).log2() + 2.0)
                * (log_ratio + 1.0)
    }
}

/// Rate bound for the optimal polynomial decay over a feasible set of
/// squared diameter `omega_c`: `e_k <= C_e k^{-theta/(1-theta)}` with
/// `C_e = (theta kappa^2/(1-theta))^{theta/(1-theta)}`, valid from
/// `ceil(2 theta/(1-theta))` (or 2 when `theta < 1/2`). The condition
/// measure must satisfy `kappa >= sqrt(3) omega_c^{(1-theta)/(2 theta)}`
/// for `theta >= 1/2`, or `kappa^2 >= (2(1-theta)/theta)
/// omega_c^{(1-theta)/theta}` below.
pub fn optimal_decay_bound(heb: &HebParams, omega_c: f64) -> Result<RateBound> {
    let theta = heb.theta();
    if theta >= 1.0 {
        return Err(Error::invalid("theta", "optimal decay bound needs theta < 1"));
    }
    if !(omega_c > 0.0 && omega_c.is_finite()) {
        return Err(Error::invalid("omega_c", "must be positive and finite"));
    }
    let kappa = heb.kappa();
    if theta >= 0.5 {
        let need = 3f64.sqrt() * omega_c.powf((1.0 - theta) / (2.0 * theta));
        if kappa < need * (1.0 - 1e-12) {
            return Err(Error::precondition(
                "kappa >= sqrt(3) omega_c^((1-theta)/(2 theta))",
                format!("kappa = {kappa} but at least {need} is required"),
            ));
        }
    } else {
        let need = 2.0 * (1.0 - theta) / theta * omega_c.powf((1.0 - theta) / theta);
        if kappa * kappa < need * (1.0 - 1e-12) {
            return Err(Error::precondition(
                "kappa^2 >= 2((1-theta)/theta) omega_c^((1-theta)/theta)",
                format!("kappa^2 = {} but at least {need} is required", kappa * kappa),
            ));
        }
    }
    let b = theta / (1.0 - theta);
    let coeff = (kappa * kappa * b).powf(b);
    let k_start = if theta >= 0.5 { (2.0 * b).ceil() as u64 } else { 2 };
    Ok(RateBound {
        kind: BoundKind::OptimalDecay,
        k_start,
        index_offset: 0,
        form: Form::Power { coeff, exponent: -b },
    })
}

/// One checked inequality: `lhs <= rhs`, or unverifiable when inputs are
/// missing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub name: &'static str,
    pub holds: Option<bool>,
    pub lhs: f64,
    pub rhs: f64,
}

impl ConditionReport {
    fn checked(name: &'static str, lhs: f64, rhs: f64) -> Self {
        ConditionReport { name, holds: Some(lhs <= rhs), lhs, rhs }
    }

    fn unverifiable(name: &'static str) -> Self {
        ConditionReport { name, holds: None, lhs: f64::NAN, rhs: f64::NAN }
    }
}

/// Constants and condition checks for general polynomial decay
/// `alpha_k = alpha1 k^{-p}`.
#[derive(Debug, Clone)]
pub struct DecayConstants {
    pub c1: f64,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub c4: Option<f64>,
    pub c5: Option<f64>,
    pub conditions: Vec<ConditionReport>,
    /// The rate bound matching the regime, when enough inputs were supplied
    /// to build it.
    pub rate: Option<RateBound>,
}

/// Evaluate the decay constants `C1..C5` and check the admissibility
/// conditions of the polynomial-decay guarantees. Nothing is rejected; each
/// condition is reported as holding, failing, or unverifiable (when
/// `d1_sq`/`k0` are not supplied).
pub fn decay_constants(
    alpha1: f64,
    p: f64,
    heb: &HebParams,
    d1_sq: Option<f64>,
    k0: Option<u64>,
) -> DecayConstants {
    let theta = heb.theta();
    let c = heb.c();
    let g = heb.g();
    let e = std::f64::consts::E;
    let c1 = 2f64.powf(2.0 * p * theta + 1.0)
        * ((alpha1 * g * g / c).powf(2.0 * theta) + alpha1 * alpha1 * g * g);
    let mut conditions = Vec::new();
    let mut out = DecayConstants { c1, c2: None, c3: None, c4: None, c5: None, conditions: Vec::new(), rate: None };

    if theta < 0.5 {
        let c2 = (alpha1 * (1.0 - 2.0 * theta) / (2.0 * theta * (1.0 - p))).powf(2.0 * theta / (2.0 * theta - 1.0));
        out.c2 = Some(c2);
        conditions.push(ConditionReport::checked("1/(2(1-theta)) <= p <= 1", 1.0 / (2.0 * (1.0 - theta)), p));
        // (the upper half p <= 1 is part of the same admissibility window)
        conditions.push(ConditionReport::checked("p <= 1", p, 1.0));
        match k0 {
            Some(k0) => {
                let rhs = (2.0 * theta * (1.0 - p) / (alpha1 * (1.0 - 2.0 * theta)))
                    .powf(2.0 * theta / (1.0 - 2.0 * theta))
                    * ((k0 + 1) as f64).powf(2.0 * theta * (2.0 * p * (1.0 - theta) - 1.0) / (1.0 - 2.0 * theta));
                conditions.push(ConditionReport::checked("C1 within the k0 window", c1, rhs));
            }
            None => conditions.push(ConditionReport::unverifiable("C1 within the k0 window")),
        }
        match d1_sq {
            Some(d1_sq) => {
                let d1 = d1_sq.sqrt();
                let rhs = 2.0 * theta * (1.0 - p) * d1.powf((2.0 * theta - 1.0) / theta) / (1.0 - 2.0 * theta);
                conditions.push(ConditionReport::checked("alpha1 within the initial-distance window", alpha1, rhs));
            }
            None => conditions.push(ConditionReport::unverifiable("alpha1 within the initial-distance window")),
        }
        let p_opt = 1.0 / (2.0 * (1.0 - theta));
        let exp_ratio = 2.0 * theta / (1.0 - 2.0 * theta);
        let opt_cond_rhs = (theta / (1.0 - theta)).powf(exp_ratio);
        let opt_cond_lhs = alpha1.powf(exp_ratio) * c1;
        if (p - p_opt).abs() <= 1e-12 {
            conditions.push(ConditionReport::checked(
                "alpha1^(2 theta/(1-2 theta)) C1 <= (theta/(1-theta))^(2 theta/(1-2 theta))",
                opt_cond_lhs,
                opt_cond_rhs,
            ));
            if opt_cond_lhs <= opt_cond_rhs {
                out.rate = Some(RateBound {
                    kind: BoundKind::DecayingLowThetaOptimalP,
                    k_start: 1,
                    index_offset: 0,
                    form: Form::Power {
                        coeff: alpha1.powf(2.0 * theta / (2.0 * theta - 1.0)) * opt_cond_rhs,
                        exponent: -theta / (1.0 - theta),
                    },
                });
            }
        }
        if out.rate.is_none() {
            out.rate = Some(RateBound {
                kind: BoundKind::DecayingLowTheta,
                k_start: k0.unwrap_or(1).max(1),
                index_offset: 0,
                form: Form::MaxPower {
                    coeff: c1.max(c2),
                    e1: -2.0 * p * theta,
                    e2: 2.0 * theta * (1.0 - p) / (2.0 * theta - 1.0),
                },
            });
        }
    } else {
        // theta in [1/2, 1]; the guarantee needs p strictly inside (0, 1).
        conditions.push(ConditionReport::checked("0 < p", 0.0, p));
        conditions.push(ConditionReport::checked("p < 1", p, 1.0 - f64::EPSILON));
        if p > 0.0 && p < 1.0 {
            let c3 = c1.powf((1.0 + 2.0 * p * (theta - 1.0)) / (1.0 - p))
                * (alpha1 * (1.0 - 2f64.powf(p - 1.0)) * c * e / (4.0 * p * theta)).powf(-2.0 * p * theta / (1.0 - p));
            let c4 = 16.0 * (8.0 * theta * c1 / (alpha1 * c * e)).powf(2.0 * theta);
            out.c3 = Some(c3);
            out.c4 = Some(c4);
            match d1_sq {
                Some(d1_sq) => {
                    let d1 = d1_sq.sqrt();
                    let c5 = d1.powf((2.0 + 4.0 * p * (theta - 1.0)) / (1.0 - p))
                        * (alpha1 * c * e / (4.0 * p * theta)).powf(-2.0 * p * theta / (1.0 - p));
                    out.c5 = Some(c5);
                    out.rate = Some(RateBound {
                        kind: BoundKind::DecayingGeneral,
                        k_start: 4,
                        index_offset: 0,
                        form: Form::Power {
                            coeff: 4.0 * c1.max(c3).max(c4).max(c5),
                            exponent: -2.0 * p * theta,
                        },
                    });
                }
                None => conditions.push(ConditionReport::unverifiable("C5 needs d(x1, X_h)")),
            }
        }
    }
    out.conditions = conditions;
    out
}

/// Harmonic-stepsize bound under quadratic growth:
/// `e_k <= max(2 alpha1 G^2 / c, d1_sq) k^{-c alpha1}` for `alpha1 <= 1/c`.
pub fn qg_harmonic_bound(alpha1: f64, heb: &HebParams, d1_sq: f64) -> Result<RateBound> {
    if heb.theta() != 0.5 {
        return Err(Error::invalid("theta", "harmonic bound requires theta = 1/2"));
    }
    if !(alpha1 > 0.0) || alpha1 > 1.0 / heb.c() {
        return Err(Error::precondition(
            "0 < alpha1 <= 1/c",
            format!("alpha1 = {alpha1}, 1/c = {}", 1.0 / heb.c()),
        ));
    }
    let g = heb.g();
    Ok(RateBound {
        kind: BoundKind::HarmonicQg,
        k_start: 1,
        index_offset: 0,
        form: Form::Power {
            coeff: (2.0 * alpha1 * g * g / heb.c()).max(d1_sq),
            exponent: -heb.c() * alpha1,
        },
    })
}

/// Bound for the `(2k+1)/(2c(k+1)^2)` stepsize under quadratic growth:
/// after `k` steps, `e_{k+1} <= d1_sq/(k+1)^2 + G^2/(c^2 (k+1))`.
pub fn karimi_bound(heb: &HebParams, d1_sq: f64) -> Result<RateBound> {
    if heb.theta() != 0.5 {
        return Err(Error::invalid("theta", "this bound requires theta = 1/2"));
    }
    let g = heb.g();
    let c = heb.c();
    Ok(RateBound {
        kind: BoundKind::KarimiQg,
        k_start: 1,
        index_offset: 1,
        form: Form::TwoTerm { a: d1_sq, b: g * g / (c * c) },
    })
}

/// A fitted power law `e ~ coeff * k^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub coeff: f64,
    pub points: usize,
}

/// Least-squares fit of `ln e` against `ln k`. Nonpositive values are
/// excluded; fewer than 10 usable points is an error.
pub fn fit_power_law(ks: &[f64], es: &[f64]) -> Result<PowerLawFit> {
    if ks.len() != es.len() {
        return Err(Error::DimensionMismatch { expected: ks.len(), got: es.len() });
    }
    let pts: Vec<(f64, f64)> = ks
        .iter()
        .zip(es)
        .filter(|(k, e)| **k > 0.0 && **e > 0.0)
        .map(|(k, e)| (k.ln(), e.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(Error::invalid("window", format!("need at least 10 positive points, got {}", pts.len())));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    Ok(PowerLawFit { exponent: slope, coeff: intercept.exp(), points: pts.len() })
}

/// Fit the tail of an instrumented trace: the last `tail_fraction` of the
/// rows, using the squared-distance column.
pub fn fit_rate(trace: &RunTrace, tail_fraction: f64) -> Result<PowerLawFit> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::invalid("tail_fraction", format!("must lie in (0, 1], got {tail_fraction}")));
    }
    let n = trace.rows.len();
    let start = n - ((n as f64 * tail_fraction).ceil() as usize).min(n);
    let mut ks = Vec::new();
    let mut es = Vec::new();
    for row in &trace.rows[start..] {
        let e = row.dist_sq.ok_or_else(|| {
            Error::MissingInstrumentation("rate fitting needs d(x,X_h)^2 on every row".into())
        })?;
        ks.push(row.k as f64);
        es.push(e);
    }
    fit_power_law(&ks, &es)
}
