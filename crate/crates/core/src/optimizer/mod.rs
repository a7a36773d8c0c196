//! Minimization of shape functionals over convex subsets of a box with
//! prescribed area, by projected coordinate search on radial coordinates;
//! concave-profile descent for the resistance problem; and a Blaschke-style
//! selection of Hausdorff-convergent subsequences.

mod blaschke;
mod newton;
mod problem;
mod search;

pub use blaschke::{blaschke_select, BlaschkeLevel, BlaschkeSelection};
pub use newton::{newton_optimize_profile, project_profile};
pub use problem::{Objective, OptResult, SearchStats, ShapeProblem};
pub use search::optimize;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("objective evaluation failed after {evaluations} evaluations: {message}")]
    ObjectiveFailure {
        message: String,
        evaluations: usize,
        /// accepted (iteration, value) pairs up to the failure
        trace: Vec<(usize, f64)>,
    },
    #[error("selection emptied at ladder level {level} (epsilon = {epsilon})")]
    EmptySelection { level: usize, epsilon: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Functional(#[from] crate::functionals::FunctionalError),
}

pub type Result<T> = std::result::Result<T, OptimizeError>;
