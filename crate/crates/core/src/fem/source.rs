use crate::expr::{Bindings, CoefficientField, Expr};
use crate::geometry::{ConvexPolygon, Point, Rect};

use super::{assemble_system, quadrature_points, triangulate, FemError, Result, TriangleMesh};

/// Galerkin solution of `L u = f` with homogeneous Dirichlet data: nodal
/// values (zero on the boundary) and the constant gradient per triangle.
#[derive(Clone, Debug)]
pub struct FieldSolution {
    pub mesh: TriangleMesh,
    /// nodal values over all mesh nodes; exactly zero on boundary nodes
    pub u: Vec<f64>,
    /// per-triangle gradient of the P1 interpolant
    pub gradients: Vec<Point>,
}

impl FieldSolution {
    /// Mean of the nodal values on a triangle = value at its centroid.
    pub fn value_at_centroid(&self, t: usize) -> f64 {
        let [a, b, c] = self.mesh.triangles[t];
        (self.u[a] + self.u[b] + self.u[c]) / 3.0
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

const RESIDUAL_TOL: f64 = 1e-10;

/// Solve the source problem on a polygon. The discrete residual of the
/// reduced system is verified to be below 1e-10 relative.
pub fn solve_source(
    poly: &ConvexPolygon,
    coeff: &CoefficientField,
    f: &Expr,
    h: f64,
) -> Result<FieldSolution> {
    f.check_vars(&["x1", "x2"])?;
    let (lo, hi) = poly.bounds();
    let bbox = Rect::new(lo, hi).map_err(FemError::Geometry)?;
    coeff
        .spot_check(&bbox)
        .map_err(FemError::EllipticityViolation)?;

    let mesh = triangulate(poly, h)?;
    let sys = assemble_system(&mesh, coeff)?;
    let n = sys.interior_nodes.len();

    // load vector by edge-midpoint quadrature
    let mut rhs = vec![0.0; n];
    for tri in &mesh.triangles {
        let [a, b, c] = *tri;
        let (pa, pb, pc) = (mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
        let area = 0.5 * (pb - pa).cross(pc - pa);
        let w = area / 3.0;
        let qpts = quadrature_points(pa, pb, pc);
        let fq = [
            f.eval(&Bindings::at_point(qpts[0].x, qpts[0].y))?,
            f.eval(&Bindings::at_point(qpts[1].x, qpts[1].y))?,
            f.eval(&Bindings::at_point(qpts[2].x, qpts[2].y))?,
        ];
        // basis i takes value 1/2 at the two midpoints of its incident edges
        let contrib = [
            w * 0.5 * (fq[0] + fq[2]),
            w * 0.5 * (fq[0] + fq[1]),
            w * 0.5 * (fq[1] + fq[2]),
        ];
        for (i, &node) in tri.iter().enumerate() {
            let d = sys.dof_of_node[node];
            if d != usize::MAX {
                rhs[d] += contrib[i];
            }
        }
    }

    let chol = sys.stiffness.clone().cholesky()?;
    let u_int = chol.solve(&rhs);

    // Galerkin residual check
    let mut ku = vec![0.0; n];
    sys.stiffness.mul_vec(&u_int, &mut ku);
    let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let res_norm = ku
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if rhs_norm > 0.0 && res_norm > RESIDUAL_TOL * rhs_norm {
        return Err(FemError::SingularSystem(format!(
            "relative residual {:.3e} above {RESIDUAL_TOL:.1e}",
            res_norm / rhs_norm
        )));
    }

    let mut u = vec![0.0; mesh.n_nodes()];
    for (d, &node) in sys.interior_nodes.iter().enumerate() {
        u[node] = u_int[d];
    }
    let gradients = (0..mesh.triangles.len())
        .map(|t| {
            let [a, b, c] = mesh.triangles[t];
            let (pa, pb, pc) = (mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
            let area2 = (pb - pa).cross(pc - pa);
            let ga = Point::new(pb.y - pc.y, pc.x - pb.x) / area2;
            let gb = Point::new(pc.y - pa.y, pa.x - pc.x) / area2;
            let gc = Point::new(pa.y - pb.y, pb.x - pa.x) / area2;
            ga * u[a] + gb * u[b] + gc * u[c]
        })
        .collect();
    Ok(FieldSolution { mesh, u, gradients })
}

/// Integral over the polygon of `j(x, u, Du)`: one-point (centroid)
/// quadrature with the P1 interpolant value and the per-triangle gradient.
pub fn integral_functional(sol: &FieldSolution, j: &Expr) -> Result<f64> {
    j.check_vars(&["x1", "x2", "u", "ux", "uy"])?;
    let mut total = 0.0;
    for t in 0..sol.mesh.triangles.len() {
        let [a, b, c] = sol.mesh.triangles[t];
        let centroid =
            (sol.mesh.nodes[a] + sol.mesh.nodes[b] + sol.mesh.nodes[c]) / 3.0;
        let bindings = Bindings::at_point(centroid.x, centroid.y)
            .set("u", sol.value_at_centroid(t))
            .set("ux", sol.gradients[t].x)
            .set("uy", sol.gradients[t].y);
        total += sol.mesh.triangle_area(t) * j.eval(&bindings)?;
    }
    if !total.is_finite() {
        return Err(FemError::Expr(crate::expr::ExprError::NonFiniteResult));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn disk(n: usize, radius: f64) -> ConvexPolygon {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
                Point::new(radius * t.cos(), radius * t.sin())
            })
            .collect();
        ConvexPolygon::from_points(&pts).unwrap()
    }

    #[test]
    fn zero_source_gives_zero_solution() {
        let f = parse_expr("0").unwrap();
        let sol = solve_source(&disk(64, 1.0), &CoefficientField::laplacian(), &f, 0.1).unwrap();
        assert_eq!(sol.max_abs(), 0.0);
    }

    #[test]
    fn torsion_on_disk_coarse() {
        // -Laplace u = 1 on the unit disk: u = (1 - r^2)/4, max 0.25
        let f = parse_expr("1").unwrap();
        let sol = solve_source(&disk(128, 1.0), &CoefficientField::laplacian(), &f, 0.05).unwrap();
        assert!((sol.max_abs() - 0.25).abs() < 0.01);
        let ju = parse_expr("u").unwrap();
        let integral = integral_functional(&sol, &ju).unwrap();
        assert!((integral - std::f64::consts::PI / 8.0).abs() < 0.01);
    }

    #[test]
    fn functional_of_one_recovers_area() {
        let f = parse_expr("1").unwrap();
        let poly = disk(64, 1.0);
        let sol = solve_source(&poly, &CoefficientField::laplacian(), &f, 0.1).unwrap();
        let j = parse_expr("1").unwrap();
        let integral = integral_functional(&sol, &j).unwrap();
        assert!((integral - poly.area()).abs() < 1e-12 * poly.area());
    }

    #[test]
    fn boundary_values_are_exactly_zero() {
        let f = parse_expr("x1*x1+1").unwrap();
        let sol = solve_source(&disk(64, 1.0), &CoefficientField::laplacian(), &f, 0.1).unwrap();
        for i in sol.mesh.boundary_nodes() {
            assert_eq!(sol.u[i], 0.0);
        }
    }

    #[test]
    fn solution_variables_rejected_in_source() {
        let f = parse_expr("u").unwrap();
        assert!(solve_source(&disk(64, 1.0), &CoefficientField::laplacian(), &f, 0.1).is_err());
    }
}
