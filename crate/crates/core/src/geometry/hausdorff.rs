use super::{ConvexPolygon, Point};

/// Distance from a point to a closed convex polygon (zero inside).
pub fn distance_point_to_polygon(p: Point, poly: &ConvexPolygon) -> f64 {
    if poly.interior_depth(p) >= 0.0 {
        return 0.0;
    }
    let verts = poly.vertices();
    let n = verts.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(point_segment_distance(p, verts[i], verts[(i + 1) % n]));
    }
    best
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let t = ((p - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
    (a + e * t).distance(p)
}

/// Hausdorff distance between two convex polygons.
///
/// Each directed distance sup_{x in A} d(x, B) is a convex function of x, so
/// it is attained at a vertex of the source polygon; vertex-to-polygon
/// distances are therefore exact here.
pub fn hausdorff_distance(a: &ConvexPolygon, b: &ConvexPolygon) -> f64 {
    let d_ab = a
        .vertices()
        .iter()
        .map(|&v| distance_point_to_polygon(v, b))
        .fold(0.0, f64::max);
    let d_ba = b
        .vertices()
        .iter()
        .map(|&v| distance_point_to_polygon(v, a))
        .fold(0.0, f64::max);
    d_ab.max(d_ba)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, y0: f64, side: f64) -> ConvexPolygon {
        ConvexPolygon::from_points(&[
            Point::new(x0, y0),
            Point::new(x0 + side, y0),
            Point::new(x0 + side, y0 + side),
            Point::new(x0, y0 + side),
        ])
        .unwrap()
    }

    #[test]
    fn identical_polygons_are_at_zero() {
        let sq = square(0.0, 0.0, 1.0);
        assert_eq!(hausdorff_distance(&sq, &sq), 0.0);
    }

    #[test]
    fn translation_distance() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(0.3, 0.0, 1.0);
        assert!((hausdorff_distance(&a, &b) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn nested_squares_distance_is_corner_gap() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(0.0, 0.0, 2.0);
        assert!((hausdorff_distance(&a, &b) - 2f64.sqrt()).abs() < 1e-15);
    }
}
