use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::CoefficientField;
use crate::geometry::{ConvexPolygon, Rect};

use super::{assemble_system, triangulate, FemError, Result};

/// Ordered Dirichlet eigenvalues with discretization metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub h: f64,
    pub dof: usize,
}

impl Spectrum {
    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.eigenvalues.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(FemError::InvalidParameter(
                "eigenvalues must be finite and positive".into(),
            ));
        }
        if self.eigenvalues.windows(2).any(|w| w[0] > w[1] * (1.0 + 1e-12)) {
            return Err(FemError::InvalidParameter(
                "eigenvalues must be nondecreasing".into(),
            ));
        }
        Ok(())
    }
}

/// Fixed seed for the starting subspace; identical meshes reproduce
/// eigenvalues to full iteration tolerance across runs.
const SUBSPACE_SEED: u64 = 0x5EED;
const EXTRA_BLOCK: usize = 4;
const REL_TOL: f64 = 1e-10;
const MAX_ITERS: usize = 1000;

/// The k smallest Dirichlet eigenvalues of
/// `-d_i(a_ij d_j u) + c0 u = lambda u` on the polygon, by P1 finite
/// elements with shift-invert (at zero) block subspace iteration on the
/// assembled pencil (K, M).
pub fn eigenvalues(
    poly: &ConvexPolygon,
    coeff: &CoefficientField,
    k: usize,
    h: f64,
) -> Result<Spectrum> {
    if k == 0 {
        return Err(FemError::InvalidParameter("k must be >= 1".into()));
    }
    let (lo, hi) = poly.bounds();
    let bbox = Rect::new(lo, hi).map_err(FemError::Geometry)?;
    coeff
        .spot_check(&bbox)
        .map_err(FemError::EllipticityViolation)?;

    let mesh = triangulate(poly, h)?;
    let sys = assemble_system(&mesh, coeff)?;
    let n = sys.interior_nodes.len();
    if k > n / 4 {
        return Err(FemError::InvalidParameter(format!(
            "k = {k} exceeds dof/4 = {} (spectral-pollution guard)",
            n / 4
        )));
    }
    let lambdas = smallest_eigenvalues(&sys.stiffness, &sys.mass, k)?;
    let spectrum = Spectrum {
        eigenvalues: lambdas,
        h,
        dof: n,
    };
    spectrum.validate()?;
    Ok(spectrum)
}

/// Block subspace iteration for the generalized pencil K u = lambda M u,
/// K and M symmetric positive definite. The block has size k + 4; each sweep
/// applies K^{-1} M and extracts Ritz values; iteration stops when the first
/// k Ritz values change by less than 1e-10 relative.
pub(crate) fn smallest_eigenvalues(
    stiffness: &super::SkylineMatrix,
    mass: &super::SkylineMatrix,
    k: usize,
) -> Result<Vec<f64>> {
    let n = stiffness.n();
    let b = (k + EXTRA_BLOCK).min(n);
    let chol = stiffness.clone().cholesky()?;

    let mut rng = ChaCha8Rng::seed_from_u64(SUBSPACE_SEED);
    let mut x: Vec<Vec<f64>> = (0..b)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();

    let mut ritz_prev = vec![f64::INFINITY; b];
    let mut scratch = vec![0.0; n];
    for iter in 0..MAX_ITERS {
        // Z = M X, Y = K^{-1} Z
        let mut z: Vec<Vec<f64>> = Vec::with_capacity(b);
        let mut y: Vec<Vec<f64>> = Vec::with_capacity(b);
        for col in &x {
            mass.mul_vec(col, &mut scratch);
            z.push(scratch.clone());
            y.push(chol.solve(&scratch));
        }
        // Rayleigh-Ritz on span(Y): K-product is Y^T Z since K Y = Z
        let mut ak = DMatrix::zeros(b, b);
        let mut am = DMatrix::zeros(b, b);
        let mut my: Vec<Vec<f64>> = Vec::with_capacity(b);
        for yj in &y {
            mass.mul_vec(yj, &mut scratch);
            my.push(scratch.clone());
        }
        for i in 0..b {
            for j in 0..b {
                ak[(i, j)] = dot(&y[i], &z[j]);
                am[(i, j)] = dot(&y[i], &my[j]);
            }
        }
        // symmetrize against rounding
        for i in 0..b {
            for j in 0..i {
                let ks = 0.5 * (ak[(i, j)] + ak[(j, i)]);
                ak[(i, j)] = ks;
                ak[(j, i)] = ks;
                let ms = 0.5 * (am[(i, j)] + am[(j, i)]);
                am[(i, j)] = ms;
                am[(j, i)] = ms;
            }
        }
        let (ritz, coeffs) = match small_generalized_eig(&ak, &am) {
            Some(r) => r,
            None => {
                // rank loss in the block: re-orthonormalize and retry
                orthonormalize(&mut y);
                x = y;
                continue;
            }
        };
        // X = Y C
        let mut x_next: Vec<Vec<f64>> = vec![vec![0.0; n]; b];
        for (col, xn) in x_next.iter_mut().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                let c = coeffs[(j, col)];
                if c != 0.0 {
                    for (xi, yi) in xn.iter_mut().zip(yj) {
                        *xi += c * yi;
                    }
                }
            }
        }
        x = x_next;

        let converged = iter >= 2
            && (0..k).all(|i| {
                let change = (ritz[i] - ritz_prev[i]).abs();
                change <= REL_TOL * ritz[i].abs()
            });
        ritz_prev.copy_from_slice(&ritz);
        if converged {
            return Ok(ritz[..k].to_vec());
        }
    }
    Err(FemError::SolverNonConvergence(MAX_ITERS))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense generalized symmetric eigenproblem  Ak c = theta Am c  via Cholesky
/// of Am and a symmetric eigensolve; returns ascending Ritz values and the
/// coefficient matrix (columns are eigenvectors in the original basis).
fn small_generalized_eig(ak: &DMatrix<f64>, am: &DMatrix<f64>) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let b = ak.nrows();
    let chol = am.clone().cholesky()?;
    let l_inv = chol.l().try_inverse()?;
    let reduced = &l_inv * ak * l_inv.transpose();
    let sym = SymmetricEigen::new(reduced);
    let mut order: Vec<usize> = (0..b).collect();
    order.sort_by(|&i, &j| sym.eigenvalues[i].partial_cmp(&sym.eigenvalues[j]).unwrap());
    let mut ritz = Vec::with_capacity(b);
    let mut coeffs = DMatrix::zeros(b, b);
    let back = l_inv.transpose();
    for (col, &src) in order.iter().enumerate() {
        ritz.push(sym.eigenvalues[src]);
        let v = sym.eigenvectors.column(src);
        let c = &back * v;
        for row in 0..b {
            coeffs[(row, col)] = c[row];
        }
    }
    Some((ritz, coeffs))
}

/// Modified Gram-Schmidt, in place.
fn orthonormalize(cols: &mut [Vec<f64>]) {
    for i in 0..cols.len() {
        for j in 0..i {
            let proj = dot(&cols[i], &cols[j]);
            let (left, right) = cols.split_at_mut(i);
            for (xi, xj) in right[0].iter_mut().zip(&left[j]) {
                *xi -= proj * xj;
            }
        }
        let norm = dot(&cols[i], &cols[i]).sqrt();
        if norm > 0.0 {
            for v in cols[i].iter_mut() {
                *v /= norm;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

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
    fn square_laplacian_coarse_sanity() {
        // coarse mesh: within a few percent of 2 pi^2, converging from above
        let s = eigenvalues(&unit_square(), &CoefficientField::laplacian(), 1, 0.1).unwrap();
        let exact = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        assert!(s.eigenvalues[0] >= exact * 0.999);
        assert!(s.eigenvalues[0] <= exact * 1.05, "{}", s.eigenvalues[0]);
    }

    #[test]
    fn k_zero_rejected() {
        let err = eigenvalues(&unit_square(), &CoefficientField::laplacian(), 0, 0.1);
        assert!(err.is_err());
    }

    #[test]
    fn pollution_guard_rejects_large_k() {
        let err = eigenvalues(&unit_square(), &CoefficientField::laplacian(), 64, 0.2);
        assert!(matches!(err, Err(FemError::InvalidParameter(_))));
    }

    #[test]
    fn identical_inputs_reproduce_eigenvalues() {
        let a = eigenvalues(&unit_square(), &CoefficientField::laplacian(), 3, 0.1).unwrap();
        let b = eigenvalues(&unit_square(), &CoefficientField::laplacian(), 3, 0.1).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn indefinite_coefficients_rejected() {
        let bad = CoefficientField::from_strings("1", "2", "1", None, 0.5).unwrap();
        assert!(matches!(
            eigenvalues(&unit_square(), &bad, 1, 0.1),
            Err(FemError::EllipticityViolation(_))
        ));
    }
}
