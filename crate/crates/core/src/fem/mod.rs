//! Linear P1 finite elements on triangulated convex polygons: Dirichlet
//! eigenvalues of  -d_i(a_ij d_j u) + c0 u  and source solves  L u = f,
//! with integral functionals of the solution.

mod assemble;
mod eigen;
mod mesh;
mod skyline;
mod source;

pub use eigen::{eigenvalues, Spectrum};
pub use mesh::{triangulate, TriangleMesh};
pub use source::{integral_functional, solve_source, FieldSolution};

pub(crate) use assemble::{assemble_system, quadrature_points};
pub(crate) use skyline::SkylineMatrix;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error("mesh quality failure: {0}")]
    MeshQualityFailure(String),
    #[error("eigenvalue iteration did not converge within {0} iterations")]
    SolverNonConvergence(usize),
    #[error("coefficient field failed its ellipticity spot-check: {0}")]
    EllipticityViolation(String),
    #[error("linear system is singular or not positive definite: {0}")]
    SingularSystem(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Expr(#[from] crate::expr::ExprError),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

pub type Result<T> = std::result::Result<T, FemError>;
