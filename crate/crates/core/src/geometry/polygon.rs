use serde::{Deserialize, Serialize};

use super::{GeometryError, Point, Result, EPS_GEOM};

/// A bounded open convex region of the plane, stored as its closed CCW vertex
/// loop starting at the lexicographically smallest vertex. Area and perimeter
/// are cached at construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    area: f64,
    perimeter: f64,
}

/// Axis-aligned box, the fixed container for admissible domains.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Rect {
    pub lower: Point,
    pub upper: Point,
}

impl Rect {
    pub fn new(lower: Point, upper: Point) -> Result<Rect> {
        if !(lower.x < upper.x && lower.y < upper.y) {
            return Err(GeometryError::InvalidParameter(format!(
                "box lower corner ({}, {}) must be strictly below upper corner ({}, {})",
                lower.x, lower.y, upper.x, upper.y
            )));
        }
        if !lower.is_finite() || !upper.is_finite() {
            return Err(GeometryError::InvalidParameter(
                "box corners must be finite".into(),
            ));
        }
        Ok(Rect { lower, upper })
    }

    pub fn area(&self) -> f64 {
        (self.upper.x - self.lower.x) * (self.upper.y - self.lower.y)
    }

    pub fn center(&self) -> Point {
        (self.lower + self.upper) * 0.5
    }

    pub fn contains_point(&self, p: Point, tol: f64) -> bool {
        p.x >= self.lower.x - tol
            && p.x <= self.upper.x + tol
            && p.y >= self.lower.y - tol
            && p.y <= self.upper.y + tol
    }

    pub fn to_polygon(&self) -> ConvexPolygon {
        ConvexPolygon::from_ccw_loop(vec![
            self.lower,
            Point::new(self.upper.x, self.lower.y),
            self.upper,
            Point::new(self.lower.x, self.upper.y),
        ])
        .expect("a valid box is a valid polygon")
    }

    /// Intersect a convex polygon with the box (half-plane clipping).
    /// Returns `None` when the intersection has empty interior.
    pub fn clip(&self, poly: &ConvexPolygon) -> Option<ConvexPolygon> {
        let mut loop_: Vec<Point> = poly.vertices().to_vec();
        // (normal, offset) pairs for n.x <= d, interior on the <= side
        let planes = [
            (Point::new(-1.0, 0.0), -self.lower.x),
            (Point::new(1.0, 0.0), self.upper.x),
            (Point::new(0.0, -1.0), -self.lower.y),
            (Point::new(0.0, 1.0), self.upper.y),
        ];
        for (n, d) in planes {
            loop_ = clip_half_plane(&loop_, n, d);
            if loop_.len() < 3 {
                return None;
            }
        }
        ConvexPolygon::from_ccw_loop(loop_).ok()
    }
}

/// Sutherland-Hodgman step against the half-plane n.x <= d.
fn clip_half_plane(loop_: &[Point], n: Point, d: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(loop_.len() + 1);
    for i in 0..loop_.len() {
        let a = loop_[i];
        let b = loop_[(i + 1) % loop_.len()];
        let fa = n.dot(a) - d;
        let fb = n.dot(b) - d;
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let t = fa / (fa - fb);
            out.push(a + (b - a) * t);
        }
    }
    out
}

impl ConvexPolygon {
    /// Build from points in arbitrary order. The convex hull is taken; input
    /// points may be reordered but none may lie strictly inside the hull.
    pub fn from_points(points: &[Point]) -> Result<ConvexPolygon> {
        if points.len() < 3 {
            return Err(GeometryError::DegenerateInput(format!(
                "need at least 3 points, got {}",
                points.len()
            )));
        }
        let poly = ConvexPolygon::hull_of(points)?;
        // Every input point must lie on (or within tolerance of) the hull.
        let tol = EPS_GEOM * poly.diameter();
        for p in points {
            let depth = poly.interior_depth(*p);
            if depth > tol {
                return Err(GeometryError::NonConvexInput { depth, tol });
            }
        }
        Ok(poly)
    }

    /// Convex hull of an arbitrary point cloud; interior points are silently
    /// discarded. Use [`ConvexPolygon::from_points`] to require that the
    /// input itself is in convex position.
    pub fn hull_of(points: &[Point]) -> Result<ConvexPolygon> {
        if points.len() < 3 {
            return Err(GeometryError::DegenerateInput(format!(
                "need at least 3 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::DegenerateInput(
                "non-finite coordinate".into(),
            ));
        }
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(GeometryError::DegenerateInput(
                "points are collinear or coincident".into(),
            ));
        }
        ConvexPolygon::from_ccw_loop(hull)
    }

    /// Build from a loop already known to be convex and CCW (up to tolerance).
    /// Consecutive duplicates and collinear vertices are removed; the loop is
    /// rotated to start at the lexicographically smallest vertex.
    pub fn from_ccw_loop(mut vertices: Vec<Point>) -> Result<ConvexPolygon> {
        if vertices.len() < 3 {
            return Err(GeometryError::DegenerateInput(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let diam = diameter_of(&vertices);
        if diam <= 0.0 || !diam.is_finite() {
            return Err(GeometryError::DegenerateInput(
                "zero or non-finite extent".into(),
            ));
        }
        let dist_tol = 1e-12 * diam;
        let cross_tol = EPS_GEOM * diam * diam;

        // Drop consecutive near-duplicates.
        let mut dedup: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices.drain(..) {
            if dedup.last().is_none_or(|q| q.distance(p) > dist_tol) {
                dedup.push(p);
            }
        }
        while dedup.len() > 1 && dedup[0].distance(*dedup.last().unwrap()) <= dist_tol {
            dedup.pop();
        }
        // Drop collinear vertices (they do not change the region).
        let mut verts: Vec<Point> = Vec::with_capacity(dedup.len());
        let n = dedup.len();
        for i in 0..n {
            let prev = dedup[(i + n - 1) % n];
            let cur = dedup[i];
            let next = dedup[(i + 1) % n];
            let cross = (cur - prev).cross(next - cur);
            if cross > cross_tol {
                verts.push(cur);
            } else if cross < -cross_tol {
                return Err(GeometryError::DegenerateInput(format!(
                    "loop is not convex/CCW: reflex turn of {cross:.3e} at vertex {i}"
                )));
            }
            // near-zero cross: collinear, dropped
        }
        if verts.len() < 3 {
            return Err(GeometryError::DegenerateInput(
                "fewer than 3 vertices after removing duplicates and collinear points".into(),
            ));
        }
        // Canonical start: lexicographic minimum.
        let start = verts
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lex_cmp(**b))
            .map(|(i, _)| i)
            .unwrap();
        verts.rotate_left(start);

        let area = shoelace_area(&verts);
        if area <= 0.0 {
            return Err(GeometryError::DegenerateInput(format!(
                "non-positive area {area}"
            )));
        }
        let perimeter = loop_perimeter(&verts);
        Ok(ConvexPolygon {
            vertices: verts,
            area,
            perimeter,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(&self.vertices)
    }

    pub fn centroid(&self) -> Point {
        // area-weighted centroid via the triangle fan from vertex 0
        let v0 = self.vertices[0];
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a = 0.0;
        for i in 1..self.vertices.len() - 1 {
            let v1 = self.vertices[i];
            let v2 = self.vertices[i + 1];
            let t = (v1 - v0).cross(v2 - v0) * 0.5;
            a += t;
            cx += t * (v0.x + v1.x + v2.x) / 3.0;
            cy += t * (v0.y + v1.y + v2.y) / 3.0;
        }
        Point::new(cx / a, cy / a)
    }

    /// Depth of `p` inside the polygon: the smallest distance from `p` to an
    /// edge line, measured inward. Negative when `p` is outside.
    pub fn interior_depth(&self, p: Point) -> f64 {
        let mut depth = f64::INFINITY;
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let e = b - a;
            let len = e.norm();
            // signed distance to the edge line, positive on the interior side
            let d = e.cross(p - a) / len;
            depth = depth.min(d);
        }
        depth
    }

    pub fn contains_point(&self, p: Point, tol: f64) -> bool {
        self.interior_depth(p) >= -tol
    }

    /// Bounding box of the vertex loop (not a `Rect`: may be degenerate-thin only
    /// for invalid input, and carries no validity promise).
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Check the stored caches and convexity invariants; used by tests and
    /// after deserialization.
    pub fn validate(&self) -> Result<()> {
        let diam = self.diameter();
        let cross_tol = EPS_GEOM * diam * diam;
        let n = self.vertices.len();
        if n < 3 {
            return Err(GeometryError::DegenerateInput("fewer than 3 vertices".into()));
        }
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            if (b - a).cross(c - b) < -cross_tol {
                return Err(GeometryError::DegenerateInput(format!(
                    "convexity violated at vertex {}",
                    (i + 1) % n
                )));
            }
            if a.distance(b) <= 1e-12 * diam {
                return Err(GeometryError::DegenerateInput(format!(
                    "duplicate consecutive vertices at {i}"
                )));
            }
        }
        let area = shoelace_area(&self.vertices);
        if area <= 0.0 || (area - self.area).abs() > 1e-12 * area.abs().max(self.area.abs()) {
            return Err(GeometryError::DegenerateInput(format!(
                "cached area {} disagrees with shoelace {}",
                self.area, area
            )));
        }
        Ok(())
    }
}

fn shoelace_area(verts: &[Point]) -> f64 {
    let n = verts.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        s += a.cross(b);
    }
    s * 0.5
}

fn loop_perimeter(verts: &[Point]) -> f64 {
    let n = verts.len();
    (0..n).map(|i| verts[i].distance(verts[(i + 1) % n])).sum()
}

fn diameter_of(verts: &[Point]) -> f64 {
    let mut lo = verts[0];
    let mut hi = verts[0];
    for v in verts {
        lo.x = lo.x.min(v.x);
        lo.y = lo.y.min(v.y);
        hi.x = hi.x.max(v.x);
        hi.y = hi.y.max(v.y);
    }
    (hi - lo).norm()
}

/// Monotone-chain convex hull, CCW, collinear points dropped.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(*b));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && (lower[lower.len() - 1] - lower[lower.len() - 2])
                .cross(p - lower[lower.len() - 1])
                <= 0.0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && (upper[upper.len() - 1] - upper[upper.len() - 2])
                .cross(p - upper[upper.len() - 1])
                <= 0.0
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Outward unit normal and length of every edge, in vertex order.
/// The length-weighted normals of a closed loop sum to zero.
pub fn edge_normals(poly: &ConvexPolygon) -> Vec<(Point, f64)> {
    let verts = poly.vertices();
    let n = verts.len();
    (0..n)
        .map(|i| {
            let e = verts[(i + 1) % n] - verts[i];
            let len = e.norm();
            (Point::new(e.y / len, -e.x / len), len)
        })
        .collect()
}

/// `true` iff `inner` is contained in `outer`, with slack `EPS_GEOM * diameter`.
/// Vertex containment suffices because both polygons are convex.
pub fn contains(outer: &ConvexPolygon, inner: &ConvexPolygon) -> bool {
    let tol = EPS_GEOM * outer.diameter();
    inner
        .vertices()
        .iter()
        .all(|&v| outer.contains_point(v, tol))
}

/// Dilate `poly` by a disk of radius `eps`, approximating each corner arc from
/// the inside with `arc_segments` chords. The result is contained in the exact
/// dilation and matches it on the straight edge offsets.
pub fn minkowski_dilate(
    poly: &ConvexPolygon,
    eps: f64,
    arc_segments: usize,
) -> Result<ConvexPolygon> {
    if eps < 0.0 {
        return Err(GeometryError::NegativeEpsilon(eps));
    }
    if arc_segments == 0 {
        return Err(GeometryError::InvalidParameter(
            "arc_segments must be >= 1".into(),
        ));
    }
    if eps == 0.0 {
        return Ok(poly.clone());
    }
    let normals = edge_normals(poly);
    let verts = poly.vertices();
    let n = verts.len();
    let mut out: Vec<Point> = Vec::with_capacity(n * (arc_segments + 1));
    for i in 0..n {
        // arc at vertex i spans from the previous edge normal to this edge normal
        let (n_prev, _) = normals[(i + n - 1) % n];
        let (n_cur, _) = normals[i];
        let phi0 = n_prev.y.atan2(n_prev.x);
        let turn = n_prev.cross(n_cur).atan2(n_prev.dot(n_cur)).max(0.0);
        for k in 0..=arc_segments {
            let phi = phi0 + turn * (k as f64) / (arc_segments as f64);
            out.push(verts[i] + Point::new(phi.cos(), phi.sin()) * eps);
        }
    }
    ConvexPolygon::from_ccw_loop(out)
}

/// Homothety about `center` with ratio `alpha` (> 0); area scales by alpha^2.
pub fn scale_about(poly: &ConvexPolygon, center: Point, alpha: f64) -> Result<ConvexPolygon> {
    if !(alpha > 0.0) {
        return Err(GeometryError::NonPositiveScale(alpha));
    }
    let verts = poly
        .vertices()
        .iter()
        .map(|&v| center + (v - center) * alpha)
        .collect();
    ConvexPolygon::from_ccw_loop(verts)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn unit_square() -> ConvexPolygon {
        ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn unit_square_measures() {
        let sq = unit_square();
        assert_eq!(sq.area(), 1.0);
        assert_eq!(sq.perimeter(), 4.0);
    }

    #[test]
    fn shuffled_square_is_reordered() {
        let sq = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(sq.area(), 1.0);
        assert_eq!(sq.perimeter(), 4.0);
        // canonical start at the lexicographic minimum, CCW
        assert_eq!(sq.vertices()[0], Point::new(0.0, 0.0));
        assert_eq!(sq.vertices()[1], Point::new(1.0, 0.0));
    }

    #[test]
    fn interior_point_is_rejected() {
        let err = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.1),
            Point::new(0.5, 1.0),
        ])
        .unwrap_err();
        assert!(matches!(err, GeometryError::NonConvexInput { .. }));
    }

    #[test]
    fn triangle_measures() {
        let tri = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert!((tri.area() - 0.5).abs() < 1e-15);
        assert!((tri.perimeter() - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn regular_polygon_area_matches_closed_form() {
        let n = 64;
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let poly = ConvexPolygon::from_points(&pts).unwrap();
        let exact = (n as f64) / 2.0 * (2.0 * std::f64::consts::PI / n as f64).sin();
        assert!((poly.area() - exact).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_is_degenerate() {
        let err =
            ConvexPolygon::from_points(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, GeometryError::DegenerateInput(_)));
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let err = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
        ])
        .unwrap_err();
        assert!(matches!(err, GeometryError::DegenerateInput(_)));
    }

    #[test]
    fn square_edge_normals() {
        let sq = unit_square();
        let normals = edge_normals(&sq);
        let expected = [
            (Point::new(0.0, -1.0), 1.0),
            (Point::new(1.0, 0.0), 1.0),
            (Point::new(0.0, 1.0), 1.0),
            (Point::new(-1.0, 0.0), 1.0),
        ];
        for ((n, l), (en, el)) in normals.iter().zip(expected.iter()) {
            assert!(n.distance(*en) < 1e-15);
            assert!((l - el).abs() < 1e-15);
        }
    }

    #[test]
    fn weighted_normals_close_up() {
        let tri = ConvexPolygon::from_points(&[
            Point::new(0.2, -0.1),
            Point::new(3.0, 0.4),
            Point::new(1.0, 2.5),
        ])
        .unwrap();
        let sum = edge_normals(&tri)
            .iter()
            .fold(Point::new(0.0, 0.0), |acc, (n, l)| acc + *n * *l);
        assert!(sum.norm() < 1e-14);
    }

    #[test]
    fn containment_cases() {
        let sq = unit_square();
        let inner = ConvexPolygon::from_points(&[
            Point::new(0.2, 0.2),
            Point::new(0.8, 0.2),
            Point::new(0.8, 0.8),
            Point::new(0.2, 0.8),
        ])
        .unwrap();
        let shifted = ConvexPolygon::from_points(&[
            Point::new(0.5, 0.0),
            Point::new(1.5, 0.0),
            Point::new(1.5, 1.0),
            Point::new(0.5, 1.0),
        ])
        .unwrap();
        assert!(contains(&sq, &inner));
        assert!(contains(&sq, &sq));
        assert!(!contains(&sq, &shifted));
    }

    #[test]
    fn dilate_zero_is_identity() {
        let sq = unit_square();
        let d = minkowski_dilate(&sq, 0.0, 8).unwrap();
        assert_eq!(d.vertices(), sq.vertices());
    }

    #[test]
    fn dilate_square_steiner_area() {
        let sq = unit_square();
        let eps = 0.1;
        let d = minkowski_dilate(&sq, eps, 32).unwrap();
        let exact = 1.0 + 4.0 * eps + std::f64::consts::PI * eps * eps;
        assert!(d.area() <= exact + 1e-14);
        assert!(exact - d.area() < 1e-4);
    }

    #[test]
    fn dilate_perimeter_approaches_steiner_from_below() {
        let sq = unit_square();
        let eps = 0.1;
        let exact = 4.0 + 2.0 * std::f64::consts::PI * eps;
        let mut last = 0.0;
        for segs in [1usize, 4, 16, 64, 256] {
            let p = minkowski_dilate(&sq, eps, segs).unwrap().perimeter();
            assert!(p <= exact + 1e-12);
            assert!(p >= last - 1e-12);
            last = p;
        }
        assert!(exact - last < 1e-5);
    }

    #[test]
    fn dilate_negative_rejected() {
        let sq = unit_square();
        assert!(matches!(
            minkowski_dilate(&sq, -0.5, 8),
            Err(GeometryError::NegativeEpsilon(_))
        ));
    }

    #[test]
    fn scale_identity_and_area() {
        let sq = unit_square();
        let c = sq.centroid();
        let same = scale_about(&sq, c, 1.0).unwrap();
        assert_eq!(same.vertices(), sq.vertices());
        let double = scale_about(&sq, c, 2.0).unwrap();
        assert!((double.area() - 4.0).abs() < 1e-12);
        assert!(matches!(
            scale_about(&sq, c, 0.0),
            Err(GeometryError::NonPositiveScale(_))
        ));
    }

    #[test]
    fn clip_square_to_box() {
        let sq = ConvexPolygon::from_points(&[
            Point::new(-2.0, -2.0),
            Point::new(2.0, -2.0),
            Point::new(2.0, 2.0),
            Point::new(-2.0, 2.0),
        ])
        .unwrap();
        let b = Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap();
        let clipped = b.clip(&sq).unwrap();
        assert!((clipped.area() - 4.0).abs() < 1e-12);
        let gone = Rect::new(Point::new(10.0, 10.0), Point::new(11.0, 11.0)).unwrap();
        assert!(gone.clip(&sq).is_none());
    }
}
