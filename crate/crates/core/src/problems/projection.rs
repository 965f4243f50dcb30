//! Euclidean projections onto the feasible sets used by the test problems:
//! boxes, Euclidean balls, and the l1 ball.

use crate::{Error, Result};

/// Clamp every coordinate to `[-half_width, half_width]`.
pub fn project_box(v: &[f64], half_width: f64) -> Vec<f64> {
    v.iter().map(|x| x.clamp(-half_width, half_width)).collect()
}

/// Project onto the Euclidean ball of the given radius centered at 0.
pub fn project_ball(v: &[f64], radius: f64) -> Vec<f64> {
    let norm = crate::linalg::norm2(v);
    if norm <= radius {
        v.to_vec()
    } else {
        let s = radius / norm;
        v.iter().map(|x| x * s).collect()
    }
}

/// Projection onto `{x : ||x||_1 <= tau}` by sorting the magnitudes and
/// thresholding: the solution is `x_i = sign(v_i) max(|v_i| - lambda, 0)`
/// for the unique `lambda >= 0` that makes the result land on the ball.
pub fn project_l1_ball(v: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_tau(tau)?;
    if crate::linalg::norm1(v) <= tau {
        return Ok(v.to_vec());
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut lambda = 0.0;
    for (j, &u) in mags.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - tau) / (j + 1) as f64;
        if u - candidate > 0.0 {
            lambda = candidate;
        } else {
            break;
        }
    }
    Ok(soft_threshold(v, lambda))
}

/// Same projection via quickselect-style pivoting on the magnitudes, which
/// finds the threshold in expected linear time without a full sort. Pivots
/// come from a fixed-seed xorshift generator so the output is deterministic.
pub fn project_l1_ball_pivot(v: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_tau(tau)?;
    if crate::linalg::norm1(v) <= tau {
        return Ok(v.to_vec());
    }
    let mut pool: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    // Confirmed support: elements known to sit strictly above the threshold.
    let mut support_sum = 0.0;
    let mut support_len = 0usize;
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    while !pool.is_empty() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let pivot = pool[(state % pool.len() as u64) as usize];
        let mut ge = Vec::with_capacity(pool.len());
        let mut lt = Vec::with_capacity(pool.len());
        let mut ge_sum = 0.0;
        for &u in &pool {
            if u >= pivot {
                ge_sum += u;
                ge.push(u);
            } else {
                lt.push(u);
            }
        }
        // f(pivot) = sum over all elements of max(u - pivot, 0); confirmed
        // elements all exceed every remaining candidate.
        let f_pivot = support_sum - support_len as f64 * pivot + ge_sum - ge.len() as f64 * pivot;
        if f_pivot < tau {
            // Threshold lies below the pivot: everything >= pivot is support.
            support_sum += ge_sum;
            support_len += ge.len();
            pool = lt;
        } else {
            // Threshold is at or above the pivot: elements <= pivot cannot
            // be in the support (ties contribute zero even at equality).
            ge.retain(|&u| u > pivot);
            pool = ge;
        }
    }
    // f(pivot) >= tau > 0 forces a strictly larger element into the pool, so
    // the support cannot be empty here.
    let lambda = (support_sum - tau) / support_len as f64;
    Ok(soft_threshold(v, lambda))
}

fn soft_threshold(v: &[f64], lambda: f64) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let mag = x.abs() - lambda;
            if mag > 0.0 {
                x.signum() * mag
            } else {
                0.0
            }
        })
        .collect()
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid("tau", format!("must be positive, got {tau}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm1;
    use crate::problems::random::Rng64;

    /// Brute force for n <= 4: enumerate support sets, solve the KKT system
    /// on each, keep the feasible candidate closest to `v`.
    pub(crate) fn l1_project_enumerate(v: &[f64], tau: f64) -> Vec<f64> {
        if norm1(v) <= tau {
            return v.to_vec();
        }
        let n = v.len();
        assert!(n <= 4);
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
                .map(|i| {
                    if support.contains(&i) {
                        v[i].signum() * (v[i].abs() - lambda)
                    } else {
                        0.0
                    }
                })
                .collect();
            let dist: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
            match &best {
                Some((d, _)) if *d <= dist => {}
                _ => best = Some((dist, x)),
            }
        }
        best.expect("some support pattern must be consistent").1
    }

    /// Brute force for n <= 50: bisection on the threshold.
    pub(crate) fn l1_project_bisect(v: &[f64], tau: f64) -> Vec<f64> {
        if norm1(v) <= tau {
            return v.to_vec();
        }
        let residual = |lambda: f64| -> f64 {
            v.iter().map(|x| (x.abs() - lambda).max(0.0)).sum::<f64>() - tau
        };
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
        soft_threshold(v, 0.5 * (lo + hi))
    }

    #[test]
    fn interior_point_is_unchanged() {
        let v = vec![0.2, -0.3];
        assert_eq!(project_l1_ball(&v, 1.0).unwrap(), v);
        assert_eq!(project_l1_ball_pivot(&v, 1.0).unwrap(), v);
    }

    #[test]
    fn axis_point_soft_thresholds() {
        let x = project_l1_ball(&[3.0, 0.0], 1.0).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15);
        assert_eq!(x[1], 0.0);
        assert_eq!(l1_project_enumerate(&[3.0, 0.0], 1.0), vec![1.0, 0.0]);
    }

    #[test]
    fn symmetric_point_splits_evenly() {
        let x = project_l1_ball(&[1.0, 1.0], 1.0).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15);
        assert!((x[1] - 0.5).abs() < 1e-15);
        let oracle = l1_project_enumerate(&[1.0, 1.0], 1.0);
        assert!((oracle[0] - 0.5).abs() < 1e-12 && (oracle[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tau() {
        assert!(project_l1_ball(&[1.0], 0.0).is_err());
        assert!(project_l1_ball_pivot(&[1.0], -1.0).is_err());
    }

    #[test]
    fn matches_enumeration_oracle_small_dims() {
        let mut rng = Rng64::seed(91);
        for trial in 0..1000 {
            let n = 1 + (trial % 4);
            let v: Vec<f64> = (0..n).map(|_| rng.normal() * 2.0).collect();
            let tau = 0.25 + rng.uniform() * 2.0;
            let got = project_l1_ball(&v, tau).unwrap();
            let want = l1_project_enumerate(&v, tau);
            for i in 0..n {
                assert!(
                    (got[i] - want[i]).abs() <= 1e-8,
                    "trial {trial}: {got:?} vs {want:?} for v={v:?}, tau={tau}"
                );
            }
        }
    }

    #[test]
    fn matches_bisection_oracle_medium_dims() {
        let mut rng = Rng64::seed(92);
        for trial in 0..1000 {
            let n = 2 + (trial % 49);
            let v: Vec<f64> = (0..n).map(|_| rng.normal() * 3.0).collect();
            let tau = 0.5 + rng.uniform() * 3.0;
            let got = project_l1_ball(&v, tau).unwrap();
            let want = l1_project_bisect(&v, tau);
            for i in 0..n {
                assert!((got[i] - want[i]).abs() <= 1e-8, "trial {trial}");
            }
        }
    }

    #[test]
    fn sort_and_pivot_variants_agree() {
        let mut rng = Rng64::seed(93);
        for trial in 0..1000 {
            let n = 1 + (trial % 64);
            let v: Vec<f64> = (0..n).map(|_| rng.normal() * 2.0).collect();
            let tau = 0.25 + rng.uniform() * 2.0;
            let a = project_l1_ball(&v, tau).unwrap();
            let b = project_l1_ball_pivot(&v, tau).unwrap();
            for i in 0..n {
                assert!((a[i] - b[i]).abs() <= 1e-12, "trial {trial}: {} vs {}", a[i], b[i]);
            }
        }
    }

    #[test]
    fn pivot_handles_ties() {
        let v = vec![1.0, 1.0, 1.0, -1.0, 0.5];
        let a = project_l1_ball(&v, 2.0).unwrap();
        let b = project_l1_ball_pivot(&v, 2.0).unwrap();
        for i in 0..v.len() {
            assert!((a[i] - b[i]).abs() <= 1e-12);
        }
        assert!((norm1(&a) - 2.0).abs() < 1e-12);
    }
}
