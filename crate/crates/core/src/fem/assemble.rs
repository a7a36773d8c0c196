use crate::expr::CoefficientField;
use crate::geometry::Point;

use super::{FemError, Result, SkylineMatrix, TriangleMesh};

/// Quadrature on a triangle: the three edge midpoints with weight area/3.
/// Exact for quadratics, so the consistent P1 mass matrix is exact.
pub(crate) fn quadrature_points(pa: Point, pb: Point, pc: Point) -> [Point; 3] {
    [
        (pa + pb) * 0.5,
        (pb + pc) * 0.5,
        (pc + pa) * 0.5,
    ]
}

/// P1 basis values at the edge-midpoint quadrature nodes; row q, column i.
/// Midpoint (a+b)/2 sees 1/2 from bases a and b, zero from c, and so on.
const PHI_AT_Q: [[f64; 3]; 3] = [
    [0.5, 0.5, 0.0],
    [0.0, 0.5, 0.5],
    [0.5, 0.0, 0.5],
];

/// Assembled Dirichlet system on the interior nodes of a mesh.
pub(crate) struct AssembledSystem {
    /// stiffness (plus zero-order term), interior-interior block
    pub stiffness: SkylineMatrix,
    /// consistent mass matrix, same profile
    pub mass: SkylineMatrix,
    /// interior node index -> mesh node index
    pub interior_nodes: Vec<usize>,
    /// mesh node index -> interior dof (usize::MAX for boundary nodes)
    pub dof_of_node: Vec<usize>,
}

/// Assemble stiffness and consistent mass on the interior nodes.
///
/// Variable coefficients are sampled at the three edge midpoints; gradients
/// are exact (P1), so constant-coefficient stiffness is quadrature-exact.
pub(crate) fn assemble_system(
    mesh: &TriangleMesh,
    coeff: &CoefficientField,
) -> Result<AssembledSystem> {
    let n_nodes = mesh.n_nodes();
    let mut dof_of_node = vec![usize::MAX; n_nodes];
    let mut interior_nodes = Vec::with_capacity(mesh.n_interior());
    for node in 0..n_nodes {
        if !mesh.is_boundary(node) {
            dof_of_node[node] = interior_nodes.len();
            interior_nodes.push(node);
        }
    }
    let n = interior_nodes.len();
    if n == 0 {
        return Err(FemError::InvalidParameter(
            "mesh has no interior nodes; decrease h".into(),
        ));
    }

    // envelope profile from element connectivity
    let mut jmin: Vec<usize> = (0..n).collect();
    for tri in &mesh.triangles {
        let dofs: Vec<usize> = tri
            .iter()
            .filter_map(|&v| (dof_of_node[v] != usize::MAX).then(|| dof_of_node[v]))
            .collect();
        if let Some(&lo) = dofs.iter().min() {
            for &d in &dofs {
                jmin[d] = jmin[d].min(lo);
            }
        }
    }
    let mut stiffness = SkylineMatrix::with_profile(jmin.clone());
    let mut mass = SkylineMatrix::with_profile(jmin);

    for tri in &mesh.triangles {
        let [a, b, c] = *tri;
        let (pa, pb, pc) = (mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
        let area2 = (pb - pa).cross(pc - pa); // 2 * area
        let area = 0.5 * area2;
        // constant P1 gradients
        let grads = [
            Point::new(pb.y - pc.y, pc.x - pb.x) / area2,
            Point::new(pc.y - pa.y, pa.x - pc.x) / area2,
            Point::new(pa.y - pb.y, pb.x - pa.x) / area2,
        ];
        let qpts = quadrature_points(pa, pb, pc);
        // mean coefficient matrix over the quadrature nodes
        let mut m11 = 0.0;
        let mut m12 = 0.0;
        let mut m22 = 0.0;
        let mut c0q = [0.0; 3];
        for (q, qp) in qpts.iter().enumerate() {
            let (a11, a12, a22) = coeff.matrix_at(qp.x, qp.y)?;
            m11 += a11 / 3.0;
            m12 += a12 / 3.0;
            m22 += a22 / 3.0;
            c0q[q] = coeff.c0_at(qp.x, qp.y)?;
        }
        let w = area / 3.0;
        for i in 0..3 {
            let di = dof_of_node[tri[i]];
            if di == usize::MAX {
                continue;
            }
            for j in 0..=i {
                let dj = dof_of_node[tri[j]];
                if dj == usize::MAX {
                    continue;
                }
                let gi = grads[i];
                let gj = grads[j];
                // grad_i . (mean a) grad_j over the element
                let flux = gi.x * (m11 * gj.x + m12 * gj.y) + gi.y * (m12 * gj.x + m22 * gj.y);
                let mut k_entry = flux * area;
                let mut m_entry = 0.0;
                for q in 0..3 {
                    let phi_i = PHI_AT_Q[q][i];
                    let phi_j = PHI_AT_Q[q][j];
                    k_entry += w * c0q[q] * phi_i * phi_j;
                    m_entry += w * phi_i * phi_j;
                }
                stiffness.add(di, dj, k_entry);
                mass.add(di, dj, m_entry);
            }
        }
    }
    Ok(AssembledSystem {
        stiffness,
        mass,
        interior_nodes,
        dof_of_node,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::triangulate;
    use crate::geometry::ConvexPolygon;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn mass_row_sums_integrate_hat_functions() {
        // sum of all mass entries = integral of 1 over the union of elements
        // touching interior nodes only; check against a mesh-wise oracle
        let mesh = triangulate(&unit_square(), 0.2).unwrap();
        let sys = assemble_system(&mesh, &CoefficientField::laplacian()).unwrap();
        let n = sys.interior_nodes.len();
        let ones = vec![1.0; n];
        let mut m_ones = vec![0.0; n];
        sys.mass.mul_vec(&ones, &mut m_ones);
        let total: f64 = m_ones.iter().sum();
        // integral of sum of interior hats: strictly between 0 and |Omega|
        assert!(total > 0.0 && total < 1.0);
        // element-wise oracle for the reduced row sums: diagonal area/6 plus
        // area/12 for every interior neighbor in the element
        let mut expected = vec![0.0; n];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let area = mesh.triangle_area(t);
            for &v in tri {
                let d = sys.dof_of_node[v];
                if d == usize::MAX {
                    continue;
                }
                expected[d] += area / 6.0;
                for &w in tri {
                    if w != v && sys.dof_of_node[w] != usize::MAX {
                        expected[d] += area / 12.0;
                    }
                }
            }
        }
        for i in 0..n {
            assert!((m_ones[i] - expected[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn stiffness_of_laplacian_is_positive_definite() {
        let mesh = triangulate(&unit_square(), 0.2).unwrap();
        let sys = assemble_system(&mesh, &CoefficientField::laplacian()).unwrap();
        assert!(sys.stiffness.cholesky().is_ok());
    }
}
