use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::functionals::{resistance_profile, RadialProfile};

use super::{OptimizeError, Result};

const PROJECTION_SWEEPS: usize = 50;
const PROJECTION_TOL: f64 = 1e-12;
const DELTA_START: f64 = 0.1;
const DELTA_FLOOR: f64 = 1e-3;

/// Minimize the resistance over profiles that are nonincreasing, concave and
/// bounded by [0, M]: coordinate descent on the heights, each candidate
/// re-projected onto the constraint set by alternating clamp / monotone /
/// concave adjacent-violator passes.
///
/// Starts from the straight cone. The coordinate visiting order is shuffled
/// per sweep from the seed; the step ladder is delta * M with delta halving
/// from 0.1 to 1e-3 after sweeps without improvement.
pub fn newton_optimize_profile(
    height_bound: f64,
    radius: f64,
    n_r: usize,
    budget: usize,
    seed: u64,
) -> Result<RadialProfile> {
    if !(height_bound > 0.0) || !(radius > 0.0) {
        return Err(OptimizeError::InvalidParameter(format!(
            "height bound and radius must be positive, got M = {height_bound}, R = {radius}"
        )));
    }
    if n_r < 50 {
        return Err(OptimizeError::InvalidParameter(format!(
            "n_r must be >= 50, got {n_r}"
        )));
    }
    if budget < 1 {
        return Err(OptimizeError::InvalidParameter("budget must be >= 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = RadialProfile::cone(radius, height_bound, n_r);
    let mut best_value = resistance_profile(&current)?;
    let mut evaluations = 1usize;
    let mut delta = DELTA_START;
    let mut order: Vec<usize> = (0..=n_r).collect();

    while evaluations < budget && delta >= DELTA_FLOOR {
        let mut improved = false;
        order.shuffle(&mut rng);
        for &i in &order {
            if evaluations >= budget {
                break;
            }
            for sign in [-1.0, 1.0] {
                if evaluations >= budget {
                    break;
                }
                let mut heights = current.heights.clone();
                heights[i] += sign * delta * height_bound;
                let candidate =
                    project_profile(heights, height_bound, radius, n_r);
                if candidate.heights == current.heights {
                    continue; // projection undid the move
                }
                let value = resistance_profile(&candidate)?;
                evaluations += 1;
                if value < best_value {
                    best_value = value;
                    current = candidate;
                    improved = true;
                }
            }
        }
        if !improved {
            delta *= 0.5;
        }
    }
    Ok(current)
}

/// Project heights onto { 0 <= u <= M, nonincreasing, concave }: clamp, then
/// a nonincreasing adjacent-violators pass on the heights, then one on the
/// slopes, repeated to a joint fixed point (at most 50 sweeps).
pub fn project_profile(
    mut heights: Vec<f64>,
    height_bound: f64,
    radius: f64,
    n_r: usize,
) -> RadialProfile {
    debug_assert_eq!(heights.len(), n_r + 1);
    for _ in 0..PROJECTION_SWEEPS {
        for u in heights.iter_mut() {
            *u = u.clamp(0.0, height_bound);
        }
        pava_nonincreasing(&mut heights);
        concave_pass(&mut heights);
        if satisfies_all(&heights, height_bound) {
            break;
        }
    }
    RadialProfile {
        radius,
        height_bound,
        heights,
    }
}

fn satisfies_all(heights: &[f64], height_bound: f64) -> bool {
    let n = heights.len();
    heights
        .iter()
        .all(|u| *u >= -PROJECTION_TOL && *u <= height_bound + PROJECTION_TOL)
        && (0..n - 1).all(|i| heights[i + 1] <= heights[i] + PROJECTION_TOL)
        && (1..n - 1).all(|i| {
            heights[i + 1] - 2.0 * heights[i] + heights[i - 1] <= PROJECTION_TOL
        })
}

/// Weighted pool-adjacent-violators for a nonincreasing target, in place.
fn pava_nonincreasing(values: &mut [f64]) {
    let n = values.len();
    // blocks of (mean, weight)
    let mut means: Vec<f64> = Vec::with_capacity(n);
    let mut weights: Vec<f64> = Vec::with_capacity(n);
    for &v in values.iter() {
        means.push(v);
        weights.push(1.0);
        // pool while the sequence increases
        while means.len() > 1 && means[means.len() - 2] < means[means.len() - 1] {
            let m2 = means.pop().unwrap();
            let w2 = weights.pop().unwrap();
            let m1 = *means.last().unwrap();
            let w1 = *weights.last().unwrap();
            *means.last_mut().unwrap() = (m1 * w1 + m2 * w2) / (w1 + w2);
            *weights.last_mut().unwrap() = w1 + w2;
        }
    }
    let mut at = 0;
    for (m, w) in means.into_iter().zip(weights) {
        for _ in 0..w as usize {
            values[at] = m;
            at += 1;
        }
    }
}

/// Concavity as nonincreasing slopes: adjacent-violators on the difference
/// sequence, rebuilt from the first height (total drop preserved).
fn concave_pass(heights: &mut [f64]) {
    let n = heights.len();
    if n < 3 {
        return;
    }
    let mut slopes: Vec<f64> = heights.windows(2).map(|w| w[1] - w[0]).collect();
    pava_nonincreasing(&mut slopes);
    for i in 0..n - 1 {
        heights[i + 1] = heights[i] + slopes[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn projection_yields_valid_profiles() {
        let cases: Vec<Vec<f64>> = vec![
            vec![0.0, 1.0, 0.0, 0.5, 0.2, 0.1],
            vec![2.0, -1.0, 0.5, 0.4, 0.3, 0.0],
            vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ];
        for heights in cases {
            let p = project_profile(heights, 1.0, 1.0, 5);
            p.validate().unwrap();
        }
    }

    #[test]
    fn valid_profile_is_projection_fixed_point() {
        let cone = RadialProfile::cone(1.0, 1.0, 50);
        let p = project_profile(cone.heights.clone(), 1.0, 1.0, 50);
        for (a, b) in p.heights.iter().zip(&cone.heights) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn descent_beats_the_cone() {
        let p = newton_optimize_profile(1.0, 1.0, 100, 4000, 1).unwrap();
        p.validate().unwrap();
        let r = resistance_profile(&p).unwrap();
        assert!(r < PI / 2.0, "resistance {r} not below the cone value");
    }

    #[test]
    fn vanishing_height_bound_degenerates_to_flat_disk() {
        let p = newton_optimize_profile(1e-6, 1.0, 60, 200, 1).unwrap();
        let r = resistance_profile(&p).unwrap();
        assert!((r - PI).abs() < 1e-3 * PI);
    }

    #[test]
    fn determinism_per_seed() {
        let a = newton_optimize_profile(1.0, 1.0, 60, 500, 7).unwrap();
        let b = newton_optimize_profile(1.0, 1.0, 60, 500, 7).unwrap();
        assert_eq!(a.heights, b.heights);
    }

    #[test]
    fn preconditions_enforced() {
        assert!(newton_optimize_profile(0.0, 1.0, 60, 10, 1).is_err());
        assert!(newton_optimize_profile(1.0, 1.0, 10, 10, 1).is_err());
    }
}
