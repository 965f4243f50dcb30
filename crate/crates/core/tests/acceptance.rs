//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS line with its runtime (visible with `--nocapture`). Criterion 11
//! (experiment presets) lives in the CLI crate next to the presets.

use std::sync::Arc;
use std::time::Instant;

use subgrad::analysis::{self, fit_power_law};
use subgrad::problems::random::Rng64;
use subgrad::problems::{self, projection, LadProblem, PowerGrowthProblem};
use subgrad::recursion::verify_key_recursion;
use subgrad::schedules::StepsizeSchedule;
use subgrad::solvers::{self, Ds2SgConfig, Ds2Stopping, DsSgConfig};
use subgrad::{HebParams, ProblemInstance};

fn assert_runtime(criterion: &str, started: Instant, limit_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < limit_s, "{criterion} took {elapsed:.2}s, limit {limit_s}s");
    println!("[PASS] {criterion} ({elapsed:.2}s)");
}

fn box_l1_4() -> ProblemInstance {
    problems::l1_box(4, 0.5).unwrap()
}

fn quad_interval() -> ProblemInstance {
    problems::power_growth(PowerGrowthProblem { c: 1.0, theta: 0.5, dim: 1, radius: 1.0 }).unwrap()
}

#[test]
fn criterion_01_key_recursion_across_problems_and_schedules() {
    let started = Instant::now();
    let mut problems_under_test: Vec<(String, ProblemInstance)> = Vec::new();
    for (theta, dim, radius) in [
        (0.25, 2, 0.5),
        (1.0 / 3.0, 3, 1.0),
        (0.5, 1, 1.0),
        (0.5, 4, 2.0),
        (2.0 / 3.0, 2, 1.0),
        (0.75, 3, 1.0),
        (1.0, 1, 1.0),
        (1.0, 5, 2.0),
    ] {
        let p = problems::power_growth(PowerGrowthProblem { c: 1.0, theta, dim, radius }).unwrap();
        problems_under_test.push((format!("power(theta={theta:.2},dim={dim})"), p));
    }
    problems_under_test.push(("l1_box(2)".into(), problems::l1_box(2, 1.0).unwrap()));
    problems_under_test.push(("l1_box(4)".into(), box_l1_4()));
    assert!(problems_under_test.len() >= 10);

    let schedules = [
        StepsizeSchedule::constant(0.05).unwrap(),
        StepsizeSchedule::constant(0.01).unwrap(),
        StepsizeSchedule::polynomial(0.1, 0.99).unwrap(),
        StepsizeSchedule::polynomial(0.1, 0.5).unwrap(),
        StepsizeSchedule::polynomial(0.05, 0.75).unwrap(),
    ];

    let mut rng = Rng64::seed(1001);
    let mut runs = 0;
    for (name, problem) in &problems_under_test {
        for (si, schedule) in schedules.iter().enumerate() {
            let x1: Vec<f64> =
                (0..problem.dim()).map(|_| rng.normal()).collect();
            let report = solvers::generic_sg(problem, schedule, 1000, &x1).unwrap();
            let check = verify_key_recursion(&report.trace, problem.heb(), 1e-9).unwrap();
            assert!(
                check.ok,
                "{name} with schedule #{si}: recursion violated at k={:?} by {:.3e}",
                check.first_violation, check.excess
            );
            assert_eq!(check.pairs_checked, 1000);
            runs += 1;
        }
    }
    assert!(runs >= 50);
    assert_runtime("criterion 1: key recursion on 10 problems x 5 schedules x 1000 steps", started, 5.0);
}

#[test]
fn criterion_02_fixed_sg_linear_phase() {
    let started = Instant::now();

    // Quadratic growth: h = x^2 on [-1,1], alpha = 0.1, x1 = 1.
    let p = quad_interval();
    let fb = analysis::fixed_bound(0.1, p.heb(), 1.0, None).unwrap();
    assert!((fb.e_star - 0.2).abs() < 1e-15);
    assert!((fb.q - 0.8).abs() < 1e-15);
    let report = solvers::fixed_sg(&p, 200, 0.1, &[1.0]).unwrap();
    let series = report.trace.dist_sq_series().unwrap();
    assert_eq!(series.len(), 201);
    if let Some((k, excess)) = fb.rate.first_violation(&series, 1e-9) {
        panic!("quadratic-growth linear phase violated at k={k} by {excess:.3e}");
    }

    // Sharp case: h = ||x||_1 on the box, max-form bound.
    let p = box_l1_4();
    let fb = analysis::fixed_bound(0.1, p.heb(), 1.0, None).unwrap();
    let report = solvers::fixed_sg(&p, 200, 0.1, &[0.5, 0.5, 0.5, 0.5]).unwrap();
    let series = report.trace.dist_sq_series().unwrap();
    if let Some((k, excess)) = fb.rate.first_violation(&series, 1e-9) {
        panic!("sharp-case max-form bound violated at k={k} by {excess:.3e}");
    }

    assert_runtime("criterion 2: fixed-step linear phase (theta = 1/2 and theta = 1)", started, 1.0);
}

#[test]
fn criterion_03_fixed_sg_iteration_complexity() {
    let started = Instant::now();
    let p = quad_interval();
    let eps = 0.04;
    let k_star = solvers::fixed_sg_iteration_count(eps, p.heb(), 1.0, None).unwrap();
    assert_eq!(k_star, 81);
    let schedule = StepsizeSchedule::fixed_eps_constant(eps, p.heb()).unwrap();
    assert!((schedule.alpha(1) - 0.02).abs() < 1e-15);
    let report = solvers::generic_sg(&p, &schedule, 400, &[1.0]).unwrap();
    let series = report.trace.dist_sq_series().unwrap();
    for (idx, e) in series.iter().enumerate() {
        let k = idx as u64 + 1;
        if k >= k_star + 1 {
            assert!(*e <= 2.0 * eps + 1e-12, "e_{k} = {e} exceeds 2 eps");
        }
    }
    assert_runtime("criterion 3: fixed-step iteration complexity (K = 81, 2 eps = 0.08)", started, 1.0);
}

#[test]
fn criterion_04_descending_stairs() {
    let started = Instant::now();
    let p = box_l1_4();
    let cfg = DsSgConfig::new(HebParams::new(1.0, 1.0, 2.0).unwrap(), 4.0, 1.0, 1e-6).unwrap();
    let report = solvers::ds_sg(&p, &cfg, &[0.5, 0.5, 0.5, 0.5]).unwrap();

    // (a) every stair meets its tolerance beta^{-m} omega1
    for ph in &report.phases {
        let bound = 4.0f64.powi(-(ph.stair as i32)) * cfg.omega1;
        let got = ph.end_dist_sq.unwrap();
        assert!(got <= bound * (1.0 + 1e-9), "stair {}: {got} > {bound}", ph.stair);
    }
    // (b) final target
    assert!(report.final_dist_sq.unwrap() <= 1e-6);
    // (c) evaluation budget
    let budget = analysis::dssg_eval_bound(&cfg);
    assert!(
        (report.subgrad_evals as f64) <= budget,
        "evals {} exceed budget {budget}",
        report.subgrad_evals
    );
    assert_runtime("criterion 4: descending stairs (per-stair tolerances, final target, budget)", started, 1.0);
}

#[test]
fn criterion_05_doubling_trick() {
    let started = Instant::now();
    let p = box_l1_4();
    let true_c = 1.0;
    // Sharp-case default initial estimate c1 = G/2; the solver never sees
    // the true constant.
    let c1 = Ds2SgConfig::default_c1(1.0, 2.0, 4.0);
    assert_eq!(c1, 1.0);
    let outer = (c1 / true_c).log2().max(0.0).ceil() as u32 + 1;
    let cfg =
        Ds2SgConfig::new(c1, 1.0, 2.0, 4.0, 4.0, 1e-6, Ds2Stopping::MaxOuterLoops(outer)).unwrap();
    assert_eq!(cfg.certified_outer_loops(true_c), outer);
    let report = solvers::ds2_sg(&p, &cfg, &[0.5, 0.5, 0.5, 0.5]).unwrap();
    assert!(report.final_dist_sq.unwrap() <= 1e-6);
    let budget = analysis::ds2sg_eval_bound(&cfg, true_c);
    assert!(
        (report.subgrad_evals as f64) <= budget,
        "evals {} exceed budget {budget}",
        report.subgrad_evals
    );
    assert_runtime("criterion 5: doubling trick (target at certified loop, budget)", started, 2.0);
}

#[test]
fn criterion_06_optimal_decay() {
    let started = Instant::now();

    // theta = 1/2: h = ||x||^2 on the unit ball declared with c = 1/2,
    // G = 2, so kappa = 4 and the bound is 16/k from k = 2.
    let declared = HebParams::new(0.5, 0.5, 2.0).unwrap();
    let p = problems::power_growth(PowerGrowthProblem { c: 1.0, theta: 0.5, dim: 2, radius: 1.0 })
        .unwrap()
        .with_heb(declared);
    let (schedule, params) = StepsizeSchedule::optimal_polynomial(&declared).unwrap();
    assert_eq!(params.p, 1.0);
    assert!((params.alpha1 - 2.0).abs() < 1e-12);
    let bound = analysis::optimal_decay_bound(&declared, 4.0).unwrap();
    assert!((bound.bound(16) - 1.0).abs() < 1e-12);
    let report = solvers::generic_sg(&p, &schedule, 10_000, &[1.0, 0.0]).unwrap();
    let series = report.trace.dist_sq_series().unwrap();
    if let Some((k, excess)) = bound.first_violation(&series, 1e-9) {
        panic!("theta=1/2 optimal decay violated at k={k} by {excess:.3e}");
    }

    // theta = 1/4 analog on a power-growth instance satisfying the
    // low-exponent condition kappa^2 >= 6 omega_c^3.
    let declared = HebParams::new(0.2, 0.25, 0.5).unwrap();
    let p = problems::power_growth(PowerGrowthProblem { c: 1.0, theta: 0.25, dim: 2, radius: 0.5 })
        .unwrap()
        .with_heb(declared);
    assert!(declared.kappa() * declared.kappa() >= 6.0);
    let (schedule, params) = StepsizeSchedule::optimal_polynomial(&declared).unwrap();
    assert!((params.p - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(params.k_start, 2);
    let bound = analysis::optimal_decay_bound(&declared, 1.0).unwrap();
    assert_eq!(bound.k_start, 2);
    let report = solvers::generic_sg(&p, &schedule, 10_000, &[0.5, 0.0]).unwrap();
    let series = report.trace.dist_sq_series().unwrap();
    if let Some((k, excess)) = bound.first_violation(&series, 1e-9) {
        panic!("theta=1/4 optimal decay violated at k={k} by {excess:.3e}");
    }

    assert_runtime("criterion 6: optimal polynomial decay (theta = 1/2 and theta = 1/4)", started, 2.0);
}

/// Reference optimum for an uninstrumented polyhedral instance: run the
/// adaptive staircase scheme to numerical precision and keep the best
/// objective seen.
fn reference_optimum(lad: &LadProblem, x1: &[f64], eval_cap: u64) -> f64 {
    let g = lad.subgradient_norm_bound();
    let inst = lad.instance(g).unwrap();
    let omega_c = 4.0 * lad.tau * lad.tau;
    let cfg = Ds2SgConfig::new(
        g,
        1.0,
        g,
        2.0,
        omega_c,
        1e-12,
        Ds2Stopping::External(Arc::new(move |pr: &solvers::Ds2Progress| pr.subgrad_evals >= eval_cap)),
    )
    .unwrap();
    solvers::ds2_sg(&inst, &cfg, x1).unwrap().best_obj
}

#[test]
fn criterion_07_decaying_rate_reproduction() {
    let started = Instant::now();
    let lad = problems::make_random_lad(100, 50, 1.0, 20240811).unwrap();
    let inst = lad.instance(1.0).unwrap();
    let mut rng = Rng64::seed(7);
    let raw: Vec<f64> = (0..50).map(|_| rng.normal()).collect();
    let x1 = inst.project(&raw);

    let h_star = reference_optimum(&lad, &x1, 300_000);

    let slope_of = |alpha1: f64, p: f64| -> f64 {
        let schedule = StepsizeSchedule::polynomial(alpha1, p).unwrap();
        let report = solvers::generic_sg(&inst, &schedule, 100_000, &x1).unwrap();
        let mut ks = Vec::new();
        let mut gaps_sq = Vec::new();
        for row in &report.trace.rows {
            if row.k >= 1000 {
                let gap = (row.obj - h_star).max(0.0);
                if gap > 0.0 {
                    ks.push(row.k as f64);
                    gaps_sq.push(gap * gap);
                }
            }
        }
        fit_power_law(&ks, &gaps_sq).unwrap().exponent
    };

    let fast = slope_of(0.1, 0.99);
    assert!(fast <= -1.8, "alpha_k = 0.1 k^-0.99: fitted slope {fast} > -1.8");
    let slow = slope_of(0.01, 0.5);
    assert!(slow <= -0.9, "alpha_k = 0.01 k^-0.5: fitted slope {slow} > -0.9");

    assert_runtime(
        &format!("criterion 7: decay-rate reproduction (slopes {fast:.3} and {slow:.3})"),
        started,
        30.0,
    );
}

#[test]
fn criterion_08_quadratic_growth_harmonic_and_two_term_bounds() {
    let started = Instant::now();
    let p = quad_interval();
    let heb = p.heb();

    let harmonic = StepsizeSchedule::harmonic_qg(1.0, heb).unwrap();
    let report = solvers::generic_sg(&p, &harmonic, 10_000, &[1.0]).unwrap();
    let series = report.trace.dist_sq_series().unwrap();
    let bound = analysis::qg_harmonic_bound(1.0, heb, 1.0).unwrap();
    if let Some((k, excess)) = bound.first_violation(&series, 1e-9) {
        panic!("harmonic bound violated at k={k} by {excess:.3e}");
    }

    let karimi = StepsizeSchedule::karimi_qg(heb).unwrap();
    let report = solvers::generic_sg(&p, &karimi, 10_000, &[1.0]).unwrap();
    let series = report.trace.dist_sq_series().unwrap();
    let bound = analysis::karimi_bound(heb, 1.0).unwrap();
    if let Some((k, excess)) = bound.first_violation(&series, 1e-9) {
        panic!("two-term bound violated at k={k} by {excess:.3e}");
    }

    assert_runtime("criterion 8: quadratic-growth harmonic and two-term bounds", started, 1.0);
}

#[test]
fn criterion_09_extensions() {
    let started = Instant::now();

    // (a) bounded subgradient noise on the sharp box problem.
    let p = box_l1_4();
    let noisy = solvers::noisy_oracle(&p, 0.1, 424242).unwrap();
    assert!((noisy.heb().c() - 0.9).abs() < 1e-15);
    assert!((noisy.heb().g() - (2.0f64 * (4.0 + 0.01)).sqrt()).abs() < 1e-15);
    let run = solvers::generic_sg(&noisy, &StepsizeSchedule::polynomial(0.05, 0.8).unwrap(), 1000, &[
        0.5, -0.5, 0.5, 0.5,
    ])
    .unwrap();
    let check = verify_key_recursion(&run.trace, noisy.heb(), 1e-9).unwrap();
    assert!(check.ok, "noisy recursion violated at {:?}", check.first_violation);
    let cfg = DsSgConfig::new(*noisy.heb(), 4.0, 1.0, 1e-6).unwrap();
    let stairs = solvers::ds_sg(&noisy, &cfg, &[0.5, 0.5, 0.5, 0.5]).unwrap();
    assert!(stairs.final_dist_sq.unwrap() <= 1e-6, "noisy staircase missed the target");

    // (b) incremental sweep over the rows of ||Ex - b||_1 with E = I.
    let dim = 4;
    let eye = {
        let mut rows = vec![vec![0.0; dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        subgrad::linalg::DenseMatrix::from_rows(rows)
    };
    let target = vec![0.3, -0.2, 0.1, 0.05];
    let lad = LadProblem { e: eye, b: target.clone(), tau: 1.0 };
    let mut parts = lad.row_parts(1.0).unwrap();
    let t = target.clone();
    parts[0] = parts[0].clone().with_instrumentation(
        Arc::new(move |x: &[f64]| subgrad::linalg::dist2(x, &t)),
        0.0,
    );
    let report = solvers::incremental_sg(
        &parts,
        &StepsizeSchedule::polynomial(0.1, 0.8).unwrap(),
        1000,
        &[0.5, 0.5, -0.5, 0.25],
    )
    .unwrap();
    // Whole-sum growth c = 1 (l1 dominates l2), per-part G = 1, m = 4.
    let eff = HebParams::new(1.0, 1.0, 1.0).unwrap().incremental(parts.len());
    assert_eq!(eff.g(), 4.0);
    let check = verify_key_recursion(&report.trace, &eff, 1e-9).unwrap();
    assert!(check.ok, "incremental recursion violated at {:?}", check.first_violation);

    // (c) normalized steps certified by the Goffin measure mu_h = 1/2.
    let report = solvers::normalized_sg(
        &p,
        0.5,
        &StepsizeSchedule::polynomial(0.05, 0.9).unwrap(),
        1000,
        &[0.5, 0.25, -0.5, 0.5],
    )
    .unwrap();
    let eff = HebParams::normalized(0.5).unwrap();
    let check = verify_key_recursion(&report.trace, &eff, 1e-9).unwrap();
    assert!(check.ok, "normalized recursion violated at {:?}", check.first_violation);

    assert_runtime("criterion 9: noisy, incremental, and normalized extensions", started, 5.0);
}

mod l1_oracles {
    //! Independent projection oracles for the acceptance comparison: KKT
    //! support enumeration (n <= 4) and bisection on the threshold
    //! (n <= 50). Kept separate from the library's algorithms.

    pub fn enumerate(v: &[f64], tau: f64) -> Vec<f64> {
        if v.iter().map(|x| x.abs()).sum::<f64>() <= tau {
            return v.to_vec();
        }
        let n = v.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 1u32..(1 << n) {
            let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sum: f64 = support.iter().map(|&i| v[i].abs()).sum();
            let lambda = (sum - tau) / support.len() as f64;
            if lambda < 0.0 {
                continue;
            }
            if support.iter().any(|&i| v[i].abs() <= lambda) {
                continue;
            }
            if (0..n).any(|i| !support.contains(&i) && v[i].abs() > lambda) {
                continue;
            }
            let x: Vec<f64> = (0..n)
                .map(|i| if support.contains(&i) { v[i].signum() * (v[i].abs() - lambda) } else { 0.0 })
                .collect();
            let dist: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
            if best.as_ref().map_or(true, |(d, _)| dist < *d) {
                best = Some((dist, x));
            }
        }
        best.expect("consistent support pattern").1
    }

    pub fn bisect(v: &[f64], tau: f64) -> Vec<f64> {
        if v.iter().map(|x| x.abs()).sum::<f64>() <= tau {
            return v.to_vec();
        }
        let residual =
            |lambda: f64| v.iter().map(|x| (x.abs() - lambda).max(0.0)).sum::<f64>() - tau;
        let mut lo = 0.0;
        let mut hi = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        v.iter()
            .map(|&x| {
                let m = x.abs() - lambda;
                if m > 0.0 {
                    x.signum() * m
                } else {
                    0.0
                }
            })
            .collect()
    }
}

#[test]
fn criterion_10_l1_projection_oracles() {
    let started = Instant::now();
    let mut rng = Rng64::seed(3100);

    // Enumeration oracle, n <= 4.
    for trial in 0..1000 {
        let n = 1 + trial % 4;
        let v: Vec<f64> = (0..n).map(|_| rng.normal() * 2.0).collect();
        let tau = 0.2 + rng.uniform() * 2.5;
        let got = projection::project_l1_ball(&v, tau).unwrap();
        let want = l1_oracles::enumerate(&v, tau);
        for i in 0..n {
            assert!((got[i] - want[i]).abs() <= 1e-8, "trial {trial}: {got:?} vs {want:?}");
        }
    }

    // Bisection oracle, n <= 50.
    for trial in 0..1000 {
        let n = 2 + trial % 49;
        let v: Vec<f64> = (0..n).map(|_| rng.normal() * 3.0).collect();
        let tau = 0.5 + rng.uniform() * 3.0;
        let got = projection::project_l1_ball(&v, tau).unwrap();
        let want = l1_oracles::bisect(&v, tau);
        for i in 0..n {
            assert!((got[i] - want[i]).abs() <= 1e-8, "trial {trial}");
        }
    }

    // Sort-based and pivot variants agree to 1e-12.
    for trial in 0..1000 {
        let n = 1 + trial % 64;
        let v: Vec<f64> = (0..n).map(|_| rng.normal() * 2.0).collect();
        let tau = 0.25 + rng.uniform() * 2.0;
        let a = projection::project_l1_ball(&v, tau).unwrap();
        let b = projection::project_l1_ball_pivot(&v, tau).unwrap();
        for i in 0..n {
            assert!((a[i] - b[i]).abs() <= 1e-12, "trial {trial}");
        }
    }

    assert_runtime("criterion 10: l1 projection vs brute-force oracles and pivot variant", started, 2.0);
}
