//! Seeded generators for random convex bodies and uniformly converging
//! perturbation sequences; shared by the verification suite and tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ConvexPolygon, Point, Rect};

/// Deterministic generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random convex polygon: convex hull of `n_points` uniform samples in the
/// box, retried until the hull is non-degenerate with at least 4 vertices.
pub fn random_convex_polygon(rng: &mut ChaCha8Rng, bounds: &Rect, n_points: usize) -> ConvexPolygon {
    loop {
        let pts: Vec<Point> = (0..n_points.max(4))
            .map(|_| {
                Point::new(
                    rng.gen_range(bounds.lower.x..bounds.upper.x),
                    rng.gen_range(bounds.lower.y..bounds.upper.y),
                )
            })
            .collect();
        if let Ok(poly) = ConvexPolygon::hull_of(&pts) {
            if poly.len() >= 4 && poly.area() > 1e-3 * bounds.area() {
                return poly;
            }
        }
    }
}

/// Convex perturbation of `poly`: every vertex moved by a uniform offset in
/// `[-eps, eps]^2`, then the convex hull is taken. The result is within
/// Hausdorff distance `eps * sqrt(2)` of `poly`.
pub fn jitter_polygon(rng: &mut ChaCha8Rng, poly: &ConvexPolygon, eps: f64) -> ConvexPolygon {
    loop {
        let pts: Vec<Point> = poly
            .vertices()
            .iter()
            .map(|&v| {
                v + Point::new(rng.gen_range(-eps..=eps), rng.gen_range(-eps..=eps))
            })
            .collect();
        if let Ok(jittered) = ConvexPolygon::hull_of(&pts) {
            return jittered;
        }
        // degenerate draw (can only happen for tiny polygons); redraw
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hausdorff_distance;

    #[test]
    fn generators_are_deterministic() {
        let b = Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap();
        let mut r1 = rng_from_seed(7);
        let mut r2 = rng_from_seed(7);
        let p1 = random_convex_polygon(&mut r1, &b, 10);
        let p2 = random_convex_polygon(&mut r2, &b, 10);
        assert_eq!(p1.vertices(), p2.vertices());
    }

    #[test]
    fn jitter_stays_within_bound() {
        let b = Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap();
        let mut rng = rng_from_seed(3);
        let poly = random_convex_polygon(&mut rng, &b, 12);
        for eps in [0.5, 0.1, 0.01] {
            let j = jitter_polygon(&mut rng, &poly, eps);
            assert!(hausdorff_distance(&poly, &j) <= eps * 2f64.sqrt() + 1e-12);
        }
    }
}
