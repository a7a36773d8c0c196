use serde::{Deserialize, Serialize};

use super::{inradius_center, ConvexPolygon, GeometryError, Point, Result};

/// A convex body described by boundary distances from an interior center at
/// uniformly spaced angles. The compact coordinate system used by the shape
/// search and by subsequence selection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialFunction {
    pub center: Point,
    pub samples: Vec<f64>,
}

impl RadialFunction {
    pub fn n_theta(&self) -> usize {
        self.samples.len()
    }

    pub fn angle(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * (i as f64) / (self.samples.len() as f64)
    }

    /// Boundary point at sample index `i`.
    pub fn boundary_point(&self, i: usize) -> Point {
        let t = self.angle(i);
        self.center + Point::new(t.cos(), t.sin()) * self.samples[i]
    }

    /// Polygon with the sampled boundary points as vertices. Points on a
    /// common edge of the source polygon are collinear and get merged.
    pub fn reconstruct(&self) -> Result<ConvexPolygon> {
        let pts: Vec<Point> = (0..self.samples.len())
            .map(|i| self.boundary_point(i))
            .collect();
        ConvexPolygon::from_ccw_loop(pts)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 3 {
            return Err(GeometryError::InvalidParameter(
                "radial function needs at least 3 samples".into(),
            ));
        }
        if self.samples.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(GeometryError::InvalidParameter(
                "radial samples must be finite and positive".into(),
            ));
        }
        self.reconstruct().map(|_| ())
    }
}

/// Sample boundary distances from the Chebyshev center at `n_theta` uniform
/// angles. Requires `n_theta >= 8` so the reconstruction is meaningful.
pub fn radial_parametrization(poly: &ConvexPolygon, n_theta: usize) -> Result<RadialFunction> {
    if n_theta < 8 {
        return Err(GeometryError::InvalidParameter(format!(
            "n_theta must be >= 8, got {n_theta}"
        )));
    }
    let (center, _) = inradius_center(poly);
    let samples = (0..n_theta)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * (i as f64) / (n_theta as f64);
            ray_boundary_distance(poly, center, Point::new(t.cos(), t.sin()))
        })
        .collect();
    Ok(RadialFunction { center, samples })
}

/// Distance from an interior point to the boundary along direction `u`
/// (unit). A ray from an interior point of a convex polygon crosses the
/// boundary exactly once; rounding near a vertex may report the crossing on
/// both incident edges, so the largest valid parameter is taken.
pub(crate) fn ray_boundary_distance(poly: &ConvexPolygon, origin: Point, u: Point) -> f64 {
    let verts = poly.vertices();
    let n = verts.len();
    let mut t_hit: f64 = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let e = b - a;
        let denom = u.cross(e);
        if denom.abs() < 1e-300 {
            continue; // ray parallel to edge
        }
        let w = a - origin;
        let t = w.cross(e) / denom; // parameter along the ray
        let s = w.cross(u) / denom; // parameter along the edge
        if t > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&s) {
            t_hit = t_hit.max(t);
        }
    }
    t_hit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hausdorff_distance;

    fn regular_polygon(n: usize, radius: f64) -> ConvexPolygon {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
                Point::new(radius * t.cos(), radius * t.sin())
            })
            .collect();
        ConvexPolygon::from_points(&pts).unwrap()
    }

    #[test]
    fn disk_samples_are_radius() {
        let disk = regular_polygon(256, 2.0);
        let r = radial_parametrization(&disk, 32).unwrap();
        for s in &r.samples {
            assert!((s - 2.0).abs() < 1e-3);
        }
    }

    #[test]
    fn square_samples_on_axes_and_diagonal() {
        let sq = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        // n_theta = 8 puts samples on the four axes and the four diagonals
        let r = radial_parametrization(&sq, 8).unwrap();
        assert!((r.center.x - 0.5).abs() < 1e-12);
        assert!((r.center.y - 0.5).abs() < 1e-12);
        for i in [0usize, 2, 4, 6] {
            assert!((r.samples[i] - 0.5).abs() < 1e-12, "axis sample {i}");
        }
        for i in [1usize, 3, 5, 7] {
            assert!(
                (r.samples[i] - 2f64.sqrt() / 2.0).abs() < 1e-12,
                "diagonal sample {i}"
            );
        }
    }

    #[test]
    fn too_few_angles_rejected() {
        let sq = regular_polygon(16, 1.0);
        assert!(radial_parametrization(&sq, 4).is_err());
    }

    #[test]
    fn reconstruction_error_shrinks_with_resolution() {
        let poly = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.1),
            Point::new(2.5, 1.4),
            Point::new(1.0, 2.2),
            Point::new(-0.3, 1.0),
        ])
        .unwrap();
        let mut last = f64::INFINITY;
        for n in [16usize, 32, 64, 128, 256, 512] {
            let r = radial_parametrization(&poly, n).unwrap();
            let d = hausdorff_distance(&poly, &r.reconstruct().unwrap());
            assert!(d <= last + 1e-12, "n={n}: {d} > {last}");
            last = d;
        }
        // corner cuts dominate for polygons, so the tail is O(1/n) rather
        // than the smooth-boundary O(1/n^2)
        assert!(last < 5e-3 * poly.diameter());
    }
}
