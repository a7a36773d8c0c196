use std::collections::HashMap;

use crate::geometry::{
    hausdorff_distance, radial_parametrization, ConvexPolygon, Point, RadialFunction,
};

use super::{OptimizeError, Result};

/// Radial resolution of the clustering signature.
const SIGNATURE_ANGLES: usize = 32;

#[derive(Clone, Debug)]
pub struct BlaschkeLevel {
    pub epsilon: f64,
    /// indices into the input list that survive this level
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BlaschkeSelection {
    pub levels: Vec<BlaschkeLevel>,
    /// radial average of the final cluster: the limit candidate
    pub limit: ConvexPolygon,
}

impl BlaschkeSelection {
    pub fn final_indices(&self) -> &[usize] {
        &self.levels.last().map(|l| l.indices.as_slice()).unwrap_or(&[])
    }
}

/// Greedy demonstration of sequential compactness: for each epsilon in the
/// (strictly decreasing) ladder, keep the largest cluster of the surviving
/// bodies that lie pairwise within epsilon in Hausdorff distance.
///
/// Clustering buckets bodies by their radial coordinates (center plus 32
/// boundary distances) rounded to a grid of epsilon/2, then keeps the
/// members within epsilon/2 of the bucket's first body, which makes every
/// kept pair provably within epsilon. Ties between buckets go to the one
/// whose first body appears earliest.
pub fn blaschke_select(
    bodies: &[ConvexPolygon],
    eps_ladder: &[f64],
) -> Result<BlaschkeSelection> {
    if bodies.is_empty() {
        return Err(OptimizeError::EmptySelection {
            level: 0,
            epsilon: f64::NAN,
        });
    }
    if eps_ladder.is_empty() || eps_ladder.windows(2).any(|w| w[1] >= w[0]) || eps_ladder[0] <= 0.0
        || eps_ladder.iter().any(|e| !(e.is_finite() && *e > 0.0))
    {
        return Err(OptimizeError::InvalidParameter(
            "epsilon ladder must be strictly decreasing and positive".into(),
        ));
    }

    let radials: Vec<RadialFunction> = bodies
        .iter()
        .map(|b| radial_parametrization(b, SIGNATURE_ANGLES).map_err(OptimizeError::Geometry))
        .collect::<Result<_>>()?;

    let mut surviving: Vec<usize> = (0..bodies.len()).collect();
    let mut levels: Vec<BlaschkeLevel> = Vec::with_capacity(eps_ladder.len());
    for (level, &eps) in eps_ladder.iter().enumerate() {
        // bucket by rounded radial signature
        let grid = eps / 2.0;
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for &i in &surviving {
            buckets.entry(signature(&radials[i], grid)).or_default().push(i);
        }
        // largest bucket, ties to the earliest first occurrence
        let chosen = buckets
            .values()
            .min_by_key(|members| (usize::MAX - members.len(), members[0]))
            .expect("surviving set is nonempty");
        let representative = chosen[0];
        let mut kept: Vec<usize> = Vec::with_capacity(chosen.len());
        for &i in chosen {
            let close_to_rep =
                hausdorff_distance(&bodies[i], &bodies[representative]) <= eps / 2.0 + 1e-12;
            let close_to_all = kept
                .iter()
                .all(|&k| hausdorff_distance(&bodies[i], &bodies[k]) <= eps + 1e-12);
            if close_to_rep && close_to_all {
                kept.push(i);
            }
        }
        if kept.is_empty() {
            return Err(OptimizeError::EmptySelection {
                level,
                epsilon: eps,
            });
        }
        surviving = kept.clone();
        levels.push(BlaschkeLevel {
            epsilon: eps,
            indices: kept,
        });
    }

    let limit = radial_average(&radials, &surviving)?;
    Ok(BlaschkeSelection { levels, limit })
}

fn signature(r: &RadialFunction, grid: f64) -> Vec<i64> {
    let mut sig = Vec::with_capacity(r.samples.len() + 2);
    sig.push((r.center.x / grid).round() as i64);
    sig.push((r.center.y / grid).round() as i64);
    for s in &r.samples {
        sig.push((s / grid).round() as i64);
    }
    sig
}

/// Mean of centers and radial samples over a cluster, reconstructed as a
/// polygon (the boundary points of the final, mutually close cluster).
fn radial_average(radials: &[RadialFunction], cluster: &[usize]) -> Result<ConvexPolygon> {
    let n = cluster.len() as f64;
    let mut center = Point::new(0.0, 0.0);
    let mut samples = vec![0.0; SIGNATURE_ANGLES];
    for &i in cluster {
        center = center + radials[i].center / n;
        for (acc, s) in samples.iter_mut().zip(&radials[i].samples) {
            *acc += s / n;
        }
    }
    let avg = RadialFunction { center, samples };
    let pts: Vec<Point> = (0..SIGNATURE_ANGLES).map(|j| avg.boundary_point(j)).collect();
    // averaging can leave tolerance-level concavities; the hull absorbs them
    ConvexPolygon::hull_of(&pts).map_err(OptimizeError::Geometry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hausdorff_distance;

    fn regular_polygon(n: usize, radius: f64, cx: f64, cy: f64) -> ConvexPolygon {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
                Point::new(cx + radius * t.cos(), cy + radius * t.sin())
            })
            .collect();
        ConvexPolygon::from_points(&pts).unwrap()
    }

    fn square_at(cx: f64, cy: f64, side: f64) -> ConvexPolygon {
        let h = side / 2.0;
        ConvexPolygon::from_points(&[
            Point::new(cx - h, cy - h),
            Point::new(cx + h, cy - h),
            Point::new(cx + h, cy + h),
            Point::new(cx - h, cy + h),
        ])
        .unwrap()
    }

    #[test]
    fn constant_sequence_keeps_everything() {
        let body = regular_polygon(32, 1.0, 2.0, 2.0);
        let bodies: Vec<ConvexPolygon> = (0..10).map(|_| body.clone()).collect();
        let sel = blaschke_select(&bodies, &[0.1, 0.01]).unwrap();
        assert_eq!(sel.final_indices(), (0..10).collect::<Vec<_>>().as_slice());
        assert!(hausdorff_distance(&sel.limit, &body) < 1e-2 * body.diameter());
    }

    #[test]
    fn alternating_shapes_resolve_to_first_class() {
        let disk = regular_polygon(32, 1.0, 2.0, 2.0);
        let square = square_at(2.0, 2.0, 1.6);
        let bodies: Vec<ConvexPolygon> = (0..20)
            .map(|i| if i % 2 == 0 { disk.clone() } else { square.clone() })
            .collect();
        let sel = blaschke_select(&bodies, &[0.01]).unwrap();
        assert_eq!(sel.final_indices(), &[0, 2, 4, 6, 8, 10, 12, 14, 16, 18]);
    }

    #[test]
    fn nesting_and_pairwise_bounds() {
        use crate::geometry::{sampling, Rect};
        let b = Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap();
        let mut rng = sampling::rng_from_seed(11);
        let bodies: Vec<ConvexPolygon> = (0..60)
            .map(|_| sampling::random_convex_polygon(&mut rng, &b, 12))
            .collect();
        let ladder = [1.5, 0.75, 0.375];
        let sel = blaschke_select(&bodies, &ladder).unwrap();
        assert_eq!(sel.levels.len(), 3);
        for w in sel.levels.windows(2) {
            for i in &w[1].indices {
                assert!(w[0].indices.contains(i), "levels are not nested");
            }
        }
        for (level, eps) in sel.levels.iter().zip(ladder) {
            for &i in &level.indices {
                for &j in &level.indices {
                    assert!(hausdorff_distance(&bodies[i], &bodies[j]) <= eps + 1e-12);
                }
            }
        }
    }

    #[test]
    fn bad_ladders_rejected() {
        let body = square_at(1.0, 1.0, 1.0);
        assert!(blaschke_select(&[body.clone()], &[]).is_err());
        assert!(blaschke_select(&[body.clone()], &[0.1, 0.2]).is_err());
        assert!(blaschke_select(&[], &[0.1]).is_err());
    }
}
