use super::{inradius_center, scale_about, ConvexPolygon, GeometryError, Point, Rect, Result};

const MAX_PROJECT_ITERS: usize = 200;

/// Project an arbitrary polygon onto the admissible class: convex, inside the
/// box `d`, area within `tol * m` of `m`.
///
/// Convex hull first, then intersect with the box, then alternate
/// { scale about the Chebyshev center by sqrt(m / area), clip to the box }
/// until the area fixed point is reached.
pub fn project_to_class(
    points: &[Point],
    d: &Rect,
    m: f64,
    tol: f64,
) -> Result<ConvexPolygon> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(GeometryError::InvalidParameter(format!(
            "target area must be positive, got {m}"
        )));
    }
    if !(tol > 0.0) {
        return Err(GeometryError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if m > d.area() {
        return Err(GeometryError::InfeasibleVolume {
            requested: m,
            available: d.area(),
        });
    }
    let hull = ConvexPolygon::hull_of(points)?;
    let mut cur = d.clip(&hull).ok_or_else(|| {
        GeometryError::DegenerateInput("polygon does not intersect the box".into())
    })?;
    let mut last_area = cur.area();
    for _ in 0..MAX_PROJECT_ITERS {
        let area = cur.area();
        last_area = area;
        if (area - m).abs() <= tol * m {
            return Ok(cur);
        }
        let (center, _) = inradius_center(&cur);
        let scaled = scale_about(&cur, center, (m / area).sqrt())?;
        cur = d.clip(&scaled).ok_or_else(|| {
            GeometryError::DegenerateInput("scaled polygon left the box".into())
        })?;
    }
    Err(GeometryError::NonConvergence {
        target: m,
        last: last_area,
        iterations: MAX_PROJECT_ITERS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Rect {
        Rect::new(Point::new(x0, y0), Point::new(x1, y1)).unwrap()
    }

    #[test]
    fn member_is_fixed_point() {
        let d = rect(0.0, 0.0, 4.0, 4.0);
        let square = [
            Point::new(1.0, 1.0),
            Point::new(3.0, 1.0),
            Point::new(3.0, 3.0),
            Point::new(1.0, 3.0),
        ];
        let p = project_to_class(&square, &d, 4.0, 1e-9).unwrap();
        assert_eq!(p.vertices(), &square);
    }

    #[test]
    fn pure_scaling_without_clipping() {
        let d = rect(0.0, 0.0, 4.0, 4.0);
        let unit = [
            Point::new(1.5, 1.5),
            Point::new(2.5, 1.5),
            Point::new(2.5, 2.5),
            Point::new(1.5, 2.5),
        ];
        let p = project_to_class(&unit, &d, 4.0, 1e-9).unwrap();
        assert!((p.area() - 4.0).abs() <= 1e-9 * 4.0);
        // side of the scaled square is 2
        let (lo, hi) = p.bounds();
        assert!((hi.x - lo.x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn clip_then_scale() {
        // square of side 4 centered at the origin: only [0,2]^2 is inside the box
        let d = rect(0.0, 0.0, 4.0, 4.0);
        let big = [
            Point::new(-2.0, -2.0),
            Point::new(2.0, -2.0),
            Point::new(2.0, 2.0),
            Point::new(-2.0, 2.0),
        ];
        let p = project_to_class(&big, &d, 1.0, 1e-9).unwrap();
        assert!((p.area() - 1.0).abs() <= 1e-9);
        let tol = 1e-9;
        for v in p.vertices() {
            assert!(d.contains_point(*v, tol));
        }
    }

    #[test]
    fn infeasible_volume_rejected() {
        let d = rect(0.0, 0.0, 1.0, 1.0);
        let tri = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(matches!(
            project_to_class(&tri, &d, 2.0, 1e-9),
            Err(GeometryError::InfeasibleVolume { .. })
        ));
    }
}
