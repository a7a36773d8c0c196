use serde::{Deserialize, Serialize};

use super::{edge_normals, ConvexPolygon, Point};

/// Area, perimeter, inradius and the (strictly positive) slack of the
/// convex-body inequality  area < inradius * perimeter.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BonnesenReport {
    pub area: f64,
    pub perimeter: f64,
    pub inradius: f64,
    pub slack: f64,
}

/// Chebyshev center and inradius of a convex polygon.
///
/// Solves  max rho  s.t.  n_i . c + rho <= n_i . v_i  for every edge
/// (unit outward normal n_i through vertex v_i) by enumerating all
/// edge triples as candidate active sets; among maximizers the
/// lexicographically smallest center wins.
pub fn inradius_center(poly: &ConvexPolygon) -> (Point, f64) {
    let verts = poly.vertices();
    let normals = edge_normals(poly);
    let m = normals.len();
    let scale = poly.diameter();
    // offsets d_i = n_i . v_i
    let offs: Vec<f64> = (0..m).map(|i| normals[i].0.dot(verts[i])).collect();

    let rho_tol = 1e-12 * scale;
    let feas_tol = 64.0 * f64::EPSILON * scale;
    let det_tol = 1e-7;

    let mut best: Option<(Point, f64)> = None;
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let cand = match solve_triple(normals[i].0, normals[j].0, normals[k].0, offs[i], offs[j], offs[k], det_tol) {
                    Some(c) => c,
                    None => continue,
                };
                let (c, rho) = cand;
                if rho <= 0.0 || !rho.is_finite() || !c.is_finite() {
                    continue;
                }
                let improves = match best {
                    None => true,
                    Some((bc, br)) => {
                        rho > br + rho_tol
                            || (rho > br - rho_tol && c.lex_cmp(bc) == std::cmp::Ordering::Less)
                    }
                };
                if !improves {
                    continue;
                }
                let feasible = (0..m).all(|t| normals[t].0.dot(c) + rho <= offs[t] + feas_tol);
                if feasible {
                    best = Some((c, rho));
                }
            }
        }
    }
    // A valid polygon always yields at least one well-conditioned triple;
    // fall back to the centroid only against numerical freak cases.
    match best {
        Some((c, rho)) => (c, rho),
        None => {
            let c = poly.centroid();
            (c, poly.interior_depth(c).max(0.0))
        }
    }
}

/// Solve the 3x3 active-set system
///   n_a . c + rho = d_a,  n_b . c + rho = d_b,  n_c . c + rho = d_c.
/// Returns `None` when the system is too ill-conditioned to trust.
#[allow(clippy::too_many_arguments)]
fn solve_triple(
    na: Point,
    nb: Point,
    nc: Point,
    da: f64,
    db: f64,
    dc: f64,
    det_tol: f64,
) -> Option<(Point, f64)> {
    // determinant of [[na.x, na.y, 1], [nb.x, nb.y, 1], [nc.x, nc.y, 1]]
    let det = na.x * (nb.y - nc.y) - na.y * (nb.x - nc.x) + (nb.x * nc.y - nb.y * nc.x);
    if det.abs() < det_tol {
        return None;
    }
    // Cramer's rule (normals are unit vectors, so det is well scaled).
    let det_x = da * (nb.y - nc.y) - na.y * (db - dc) + (db * nc.y - nb.y * dc);
    let det_y = na.x * (db - dc) - da * (nb.x - nc.x) + (nb.x * dc - db * nc.x);
    let det_r = na.x * (nb.y * dc - db * nc.y) - na.y * (nb.x * dc - db * nc.x)
        + da * (nb.x * nc.y - nb.y * nc.x);
    Some((Point::new(det_x / det, det_y / det), det_r / det))
}

/// Evaluate the convex-body inequality  area < inradius * perimeter.
pub fn bonnesen_check(poly: &ConvexPolygon) -> BonnesenReport {
    let (_, rho) = inradius_center(poly);
    let area = poly.area();
    let perimeter = poly.perimeter();
    BonnesenReport {
        area,
        perimeter,
        inradius: rho,
        slack: rho * perimeter - area,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexPolygon;

    fn square() -> ConvexPolygon {
        ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn unit_square_center() {
        let (c, rho) = inradius_center(&square());
        assert!((c.x - 0.5).abs() < 1e-12);
        assert!((c.y - 0.5).abs() < 1e-12);
        assert!((rho - 0.5).abs() < 1e-12);
    }

    #[test]
    fn right_triangle_incircle() {
        let tri = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let (_, rho) = inradius_center(&tri);
        let expected = (2.0 - 2f64.sqrt()) / 2.0;
        assert!((rho - expected).abs() < 1e-12);
    }

    #[test]
    fn long_rectangle_tie_break() {
        // inradius 0.5 attained along a segment of centers; the
        // lexicographically smallest one wins
        let rect = ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(3.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let (c, rho) = inradius_center(&rect);
        assert!((rho - 0.5).abs() < 1e-12);
        assert!((c.x - 0.5).abs() < 1e-12);
        assert!((c.y - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bonnesen_unit_square() {
        let report = bonnesen_check(&square());
        assert!((report.slack - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bonnesen_disk() {
        let n = 256;
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let disk = ConvexPolygon::from_points(&pts).unwrap();
        let report = bonnesen_check(&disk);
        // circle of radius 1: slack = 2 pi - pi = pi
        assert!((report.slack - std::f64::consts::PI).abs() < 1e-2);
    }
}
