//! Instrumented test problems with known growth parameters, plus the two
//! benchmark applications (least absolute deviations and hinge-loss SVM).

pub mod projection;
pub mod random;

use crate::heb::HebParams;
use crate::linalg::{self, DenseMatrix};
use crate::problem::ProblemInstance;
use crate::{Error, Result};
use projection::{project_ball, project_box, project_l1_ball};
use random::Rng64;
use std::sync::Arc;

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `h(x) = c ||x||^(1/theta)` on the Euclidean ball of the given radius.
///
/// The growth condition holds with equality, the solution set is the
/// origin, and the subgradient norm is bounded by `(c/theta) R^(1/theta-1)`
/// on the feasible set, so this family is the canonical witness for every
/// exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerGrowthProblem {
    pub c: f64,
    pub theta: f64,
    pub dim: usize,
    pub radius: f64,
}

/// Value and (sub)gradient of the power-growth objective.
pub fn power_growth_oracle(p: &PowerGrowthProblem, x: &[f64]) -> (f64, Vec<f64>) {
    let q = 1.0 / p.theta;
    let r = linalg::norm2(x);
    if r == 0.0 {
        return (0.0, vec![0.0; x.len()]);
    }
    let value = p.c * r.powf(q);
    let scale = p.c * q * r.powf(q - 2.0);
    (value, x.iter().map(|xi| scale * xi).collect())
}

pub fn power_growth(p: PowerGrowthProblem) -> Result<ProblemInstance> {
    if !(p.radius > 0.0 && p.radius.is_finite()) {
        return Err(Error::invalid("radius", format!("must be positive, got {}", p.radius)));
    }
    let g_bound = p.c / p.theta * p.radius.powf(1.0 / p.theta - 1.0);
    let heb = HebParams::new(p.c, p.theta, g_bound)?;
    let radius = p.radius;
    let spec = p;
    ProblemInstance::new(
        p.dim,
        heb,
        Arc::new(move |x: &[f64]| power_growth_oracle(&spec, x)),
        Arc::new(move |x: &[f64]| project_ball(x, radius)),
    )
    .map(|inst| inst.with_instrumentation(Arc::new(linalg::norm2), 0.0))
}

/// `h(x) = ||x||_1` on the box `[-half_width, half_width]^dim`; sharp with
/// `c = 1` (since `||x||_1 >= ||x||_2`), `G = sqrt(dim)`.
pub fn l1_box(dim: usize, half_width: f64) -> Result<ProblemInstance> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::invalid("half_width", format!("must be positive, got {half_width}")));
    }
    let heb = HebParams::new(1.0, 1.0, (dim as f64).sqrt())?;
    ProblemInstance::new(
        dim,
        heb,
        Arc::new(|x: &[f64]| (linalg::norm1(x), x.iter().map(|&v| sign(v)).collect())),
        Arc::new(move |x: &[f64]| project_box(x, half_width)),
    )
    .map(|inst| inst.with_instrumentation(Arc::new(linalg::norm2), 0.0))
}

/// Least absolute deviations over an l1 ball:
/// `min ||E x - b||_1  subject to  ||x||_1 <= tau`.
///
/// Polyhedral, hence sharp (`theta = 1`) for some growth constant that is
/// hard to compute; instances carry a caller-supplied claim.
#[derive(Debug, Clone)]
pub struct LadProblem {
    pub e: DenseMatrix,
    pub b: Vec<f64>,
    pub tau: f64,
}

impl LadProblem {
    /// Subgradient-norm estimate used in the experiments: the sum of column
    /// norms of `E`.
    pub fn subgradient_norm_bound(&self) -> f64 {
        (0..self.e.cols()).map(|j| self.e.col_norm(j)).sum()
    }

    /// Build an oracle-backed instance with a claimed growth constant.
    pub fn instance(&self, c_claim: f64) -> Result<ProblemInstance> {
        let heb = HebParams::new(c_claim, 1.0, self.subgradient_norm_bound())?;
        let this = self.clone();
        let tau = self.tau;
        ProblemInstance::new(
            self.e.cols(),
            heb,
            Arc::new(move |x: &[f64]| lad_oracle(&this, x).expect("dimension checked by driver")),
            Arc::new(move |x: &[f64]| project_l1_ball(x, tau).expect("tau validated")),
        )
    }

    /// Per-row terms `h_i(x) = |<e_i, x> - b_i|` for the incremental method.
    /// All parts share the l1-ball projection and a common per-part norm
    /// bound (the largest row norm).
    pub fn row_parts(&self, c_claim: f64) -> Result<Vec<ProblemInstance>> {
        let g_part = (0..self.e.rows())
            .map(|i| linalg::norm2(self.e.row(i)))
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let heb = HebParams::new(c_claim, 1.0, g_part)?;
        let tau = self.tau;
        let projection: crate::problem::ProjectionOracle =
            Arc::new(move |x: &[f64]| project_l1_ball(x, tau).expect("tau validated"));
        (0..self.e.rows())
            .map(|i| {
                let row = self.e.row(i).to_vec();
                let bi = self.b[i];
                ProblemInstance::new(
                    self.e.cols(),
                    heb,
                    Arc::new(move |x: &[f64]| {
                        let r = linalg::dot(&row, x) - bi;
                        (r.abs(), row.iter().map(|&v| sign(r) * v).collect())
                    }),
                    Arc::clone(&projection),
                )
            })
            .collect()
    }
}

/// Value `||Ex - b||_1` and subgradient `E^T sign(Ex - b)` (with
/// `sign(0) = 0`).
pub fn lad_oracle(problem: &LadProblem, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    if x.len() != problem.e.cols() {
        return Err(Error::DimensionMismatch { expected: problem.e.cols(), got: x.len() });
    }
    let mut r = problem.e.mul_vec(x);
    for (ri, bi) in r.iter_mut().zip(&problem.b) {
        *ri -= bi;
    }
    let value = linalg::norm1(&r);
    let signs: Vec<f64> = r.iter().map(|&v| sign(v)).collect();
    Ok((value, problem.e.mul_transpose_vec(&signs)))
}

/// Standard-normal `E` (row-major draw order) and `b`, both from one seeded
/// stream; the benchmark setup uses `m = 100`, `n = 50`, `tau = 1`.
pub fn make_random_lad(m: usize, n: usize, tau: f64, seed: u64) -> Result<LadProblem> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("m/n", "must be at least 1"));
    }
    let mut rng = Rng64::seed(seed);
    let data: Vec<f64> = (0..m * n).map(|_| rng.normal()).collect();
    let b: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
    Ok(LadProblem { e: DenseMatrix::from_flat(m, n, data), b, tau })
}

/// l1-constrained hinge-loss SVM:
/// `min sum_i max(0, 1 - y_i <c_i, x>)  subject to  ||x||_1 <= tau`.
#[derive(Debug, Clone)]
pub struct SvmProblem {
    /// Data points, one row per example.
    pub points: DenseMatrix,
    /// Labels in {-1, +1}.
    pub labels: Vec<f64>,
    pub tau: f64,
}

impl SvmProblem {
    /// Subgradient-norm bound: the sum of data-point norms.
    pub fn subgradient_norm_bound(&self) -> f64 {
        (0..self.points.rows()).map(|i| linalg::norm2(self.points.row(i))).sum()
    }

    pub fn instance(&self, c_claim: f64) -> Result<ProblemInstance> {
        let heb = HebParams::new(c_claim, 1.0, self.subgradient_norm_bound())?;
        let this = self.clone();
        let tau = self.tau;
        ProblemInstance::new(
            self.points.cols(),
            heb,
            Arc::new(move |x: &[f64]| svm_oracle(&this, x).expect("dimension checked by driver")),
            Arc::new(move |x: &[f64]| project_l1_ball(x, tau).expect("tau validated")),
        )
    }
}

/// Hinge-loss value and subgradient; examples with margin exactly 1
/// contribute nothing.
pub fn svm_oracle(problem: &SvmProblem, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    if x.len() != problem.points.cols() {
        return Err(Error::DimensionMismatch { expected: problem.points.cols(), got: x.len() });
    }
    let mut value = 0.0;
    let mut g = vec![0.0; x.len()];
    for i in 0..problem.points.rows() {
        let margin = problem.labels[i] * linalg::dot(problem.points.row(i), x);
        if margin < 1.0 {
            value += 1.0 - margin;
            linalg::axpy(-problem.labels[i], problem.points.row(i), &mut g);
        }
    }
    Ok((value, g))
}

/// Standard-normal data points (row-major), then labels `+1` when the next
/// uniform draw is below 1/2, else `-1`; the benchmark setup uses `n = 50`,
/// `m = 100`, `tau = 2`.
pub fn make_random_svm(m: usize, n: usize, tau: f64, seed: u64) -> Result<SvmProblem> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("m/n", "must be at least 1"));
    }
    let mut rng = Rng64::seed(seed);
    let data: Vec<f64> = (0..m * n).map(|_| rng.normal()).collect();
    let labels: Vec<f64> = (0..m).map(|_| if rng.uniform() < 0.5 { 1.0 } else { -1.0 }).collect();
    Ok(SvmProblem { points: DenseMatrix::from_flat(m, n, data), labels, tau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::check_oracle_contracts;

    #[test]
    fn power_growth_examples() {
        // theta = 1/2, c = 1: h = ||x||^2, gradient 2x.
        let p = PowerGrowthProblem { c: 1.0, theta: 0.5, dim: 2, radius: 2.0 };
        let (v, g) = power_growth_oracle(&p, &[1.0, 0.0]);
        assert_eq!(v, 1.0);
        assert_eq!(g, vec![2.0, 0.0]);

        // theta = 1, c = 1, dim 1: h = |x|.
        let p = PowerGrowthProblem { c: 1.0, theta: 1.0, dim: 1, radius: 1.0 };
        let (v, g) = power_growth_oracle(&p, &[0.5]);
        assert_eq!(v, 0.5);
        assert_eq!(g, vec![1.0]);

        // theta = 1/3, c = 2 at ||x|| = 1: value 2, gradient norm 6.
        let p = PowerGrowthProblem { c: 2.0, theta: 1.0 / 3.0, dim: 3, radius: 1.0 };
        let x = [1.0 / 3f64.sqrt(); 3];
        let (v, g) = power_growth_oracle(&p, &x);
        assert!((v - 2.0).abs() < 1e-12);
        assert!((linalg::norm2(&g) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn power_growth_heb_holds_with_equality() {
        for theta in [0.25, 0.5, 0.75, 1.0] {
            let inst = power_growth(PowerGrowthProblem { c: 1.3, theta, dim: 3, radius: 1.0 }).unwrap();
            let mut rng = Rng64::seed(5);
            for _ in 0..200 {
                let x = inst.project(&[rng.normal(), rng.normal(), rng.normal()]);
                let (h, _) = inst.oracle_raw(&x);
                let d = linalg::norm2(&x);
                let rhs = 1.3 * d.powf(1.0 / theta);
                assert!((h - rhs).abs() <= 1e-12 * (1.0 + h));
            }
        }
    }

    #[test]
    fn lad_oracle_examples() {
        let p = LadProblem {
            e: DenseMatrix::from_rows(vec![vec![1.0], vec![-1.0]]),
            b: vec![0.0, 0.0],
            tau: 1.0,
        };
        let (v, g) = lad_oracle(&p, &[1.0]).unwrap();
        assert_eq!(v, 2.0);
        assert_eq!(g, vec![2.0]);

        // At the optimum the residual vanishes and so does the subgradient.
        let (v, g) = lad_oracle(&p, &[0.0]).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(g, vec![0.0]);

        assert!(lad_oracle(&p, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn lad_subgradient_inequality_sampled() {
        let lad = make_random_lad(5, 3, 1.0, 21).unwrap();
        let inst = lad.instance(1.0).unwrap();
        let check = check_oracle_contracts(&inst, 100, 1.5, 22);
        assert!(check.subgrad_ineq_dev <= 1e-10, "dev {}", check.subgrad_ineq_dev);
        assert!(check.grad_norm_excess <= 1e-12);
    }

    #[test]
    fn svm_oracle_examples() {
        let p = SvmProblem {
            points: DenseMatrix::from_rows(vec![vec![1.0, 0.0]]),
            labels: vec![1.0],
            tau: 2.0,
        };
        let (v, g) = svm_oracle(&p, &[2.0, 0.0]).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(g, vec![0.0, 0.0]);

        let (v, g) = svm_oracle(&p, &[0.0, 0.0]).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(g, vec![-1.0, 0.0]);

        // Margin exactly 1 contributes nothing.
        let (v, g) = svm_oracle(&p, &[1.0, 0.0]).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(g, vec![0.0, 0.0]);

        assert!(svm_oracle(&p, &[1.0]).is_err());
    }

    #[test]
    fn svm_subgradient_inequality_sampled() {
        let svm = make_random_svm(6, 4, 2.0, 31).unwrap();
        let inst = svm.instance(1.0).unwrap();
        let check = check_oracle_contracts(&inst, 100, 1.5, 32);
        assert!(check.subgrad_ineq_dev <= 1e-10);
        assert!(check.grad_norm_excess <= 1e-12);
    }

    #[test]
    fn random_instances_are_deterministic_and_sized() {
        let a = make_random_lad(100, 50, 1.0, 7).unwrap();
        let b = make_random_lad(100, 50, 1.0, 7).unwrap();
        assert_eq!(a.e, b.e);
        assert_eq!(a.b, b.b);
        assert_eq!(a.e.rows(), 100);
        assert_eq!(a.e.cols(), 50);
        let c = make_random_lad(100, 50, 1.0, 8).unwrap();
        assert_ne!(a.e, c.e);

        let s = make_random_svm(100, 50, 2.0, 7).unwrap();
        let t = make_random_svm(100, 50, 2.0, 7).unwrap();
        assert_eq!(s.points, t.points);
        assert_eq!(s.labels, t.labels);
        assert!(s.labels.iter().all(|&y| y == 1.0 || y == -1.0));
        assert!(s.labels.iter().any(|&y| y == 1.0) && s.labels.iter().any(|&y| y == -1.0));
    }

    #[test]
    fn degenerate_one_by_one_lad_is_solvable_by_hand() {
        let lad = make_random_lad(1, 1, 1.0, 3).unwrap();
        // Optimum: x = clamp(b/e, l1 ball), objective |e x - b|.
        let e = lad.e.row(0)[0];
        let b = lad.b[0];
        let xstar = (b / e).clamp(-1.0, 1.0);
        let (v, _) = lad_oracle(&lad, &[xstar]).unwrap();
        assert!((v - (e * xstar - b).abs()).abs() < 1e-15);
    }

    #[test]
    fn separable_all_positive_svm_reaches_zero() {
        // Single repeated positive point along e1: x = (tau, 0) classifies
        // it with margin > 1 when tau >= 1.
        let p = SvmProblem {
            points: DenseMatrix::from_rows(vec![vec![2.0, 0.0], vec![3.0, 0.0]]),
            labels: vec![1.0, 1.0],
            tau: 2.0,
        };
        let (v, _) = svm_oracle(&p, &[2.0, 0.0]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn projections_pass_contract_sampling() {
        for inst in [
            l1_box(4, 0.5).unwrap(),
            power_growth(PowerGrowthProblem { c: 1.0, theta: 1.0, dim: 2, radius: 1.0 }).unwrap(),
            make_random_lad(4, 3, 1.0, 77).unwrap().instance(1.0).unwrap(),
        ] {
            let check = check_oracle_contracts(&inst, 1000, 3.0, 55);
            assert!(check.idempotence_dev <= 1e-10, "idempotence {}", check.idempotence_dev);
            assert!(check.expansion_dev <= 1e-10, "expansion {}", check.expansion_dev);
        }
    }

    #[test]
    fn l1_box_parameters() {
        let inst = l1_box(4, 0.5).unwrap();
        assert_eq!(inst.heb().c(), 1.0);
        assert_eq!(inst.heb().g(), 2.0);
        assert_eq!(inst.heb().kappa(), 2.0);
        let (v, g) = inst.oracle_raw(&[0.5, -0.5, 0.5, 0.5]);
        assert_eq!(v, 2.0);
        assert_eq!(linalg::norm2(&g), 2.0);
    }
}
