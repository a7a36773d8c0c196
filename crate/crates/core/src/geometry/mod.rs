//! Exact geometry of convex polygons: measures, inradius, Hausdorff distance,
//! dilation and scaling, radial parametrization, and projection onto the class
//! of convex subsets of a box with prescribed area.

mod chebyshev;
mod hausdorff;
mod point;
mod polygon;
mod project;
mod radial;
pub mod sampling;

pub use chebyshev::{bonnesen_check, inradius_center, BonnesenReport};
pub use hausdorff::{distance_point_to_polygon, hausdorff_distance};
pub use point::{angle_between, Point};
pub use polygon::{contains, edge_normals, minkowski_dilate, scale_about, ConvexPolygon, Rect};
pub use project::project_to_class;
pub use radial::{radial_parametrization, RadialFunction};

use thiserror::Error;

/// Relative convexity tolerance: cross products of consecutive edges may dip
/// below zero by at most `EPS_GEOM * scale^2`.
pub const EPS_GEOM: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("input is not in convex position: a point lies {depth:.3e} inside its convex hull (tolerance {tol:.3e})")]
    NonConvexInput { depth: f64, tol: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("dilation radius must be nonnegative, got {0}")]
    NegativeEpsilon(f64),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("requested volume {requested} exceeds box area {available}")]
    InfeasibleVolume { requested: f64, available: f64 },
    #[error("volume projection did not reach area {target} within {iterations} iterations (last area {last})")]
    NonConvergence {
        target: f64,
        last: f64,
        iterations: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
