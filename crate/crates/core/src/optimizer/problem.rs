use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::expr::{CoefficientField, Expr};
use crate::fem::{eigenvalues, integral_functional, solve_source};
use crate::functionals::boundary_functional_2d;
use crate::geometry::{ConvexPolygon, Rect};

use super::{OptimizeError, Result};

/// What is minimized over the admissible class.
#[derive(Clone, Debug)]
pub enum Objective {
    /// k-th Dirichlet eigenvalue of the elliptic operator.
    Eigenvalue { k: usize, coeff: CoefficientField },
    /// Integral of j(x, u, Du) for the solution of L u = f.
    SourceIntegral {
        coeff: CoefficientField,
        f: Expr,
        j: Expr,
    },
    /// Boundary integral of f(x, nu); f = "1" gives the perimeter.
    BoundaryIntegral { f: Expr },
}

/// A complete minimization task: objective, container box, prescribed area,
/// radial resolution, mesh size, evaluation budget and seed.
#[derive(Clone, Debug)]
pub struct ShapeProblem {
    pub objective: Objective,
    pub domain: Rect,
    pub volume: f64,
    pub n_theta: usize,
    pub h: f64,
    pub budget: usize,
    pub seed: u64,
}

impl ShapeProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.volume > 0.0) || self.volume > self.domain.area() {
            return Err(OptimizeError::InvalidParameter(format!(
                "prescribed area {} must lie in (0, {}]",
                self.volume,
                self.domain.area()
            )));
        }
        if self.n_theta < 16 {
            return Err(OptimizeError::InvalidParameter(format!(
                "n_theta must be >= 16, got {}",
                self.n_theta
            )));
        }
        if self.budget < 1 {
            return Err(OptimizeError::InvalidParameter("budget must be >= 1".into()));
        }
        if !(self.h > 0.0) {
            return Err(OptimizeError::InvalidParameter(format!(
                "mesh size must be positive, got {}",
                self.h
            )));
        }
        Ok(())
    }

    /// Objective value for one admissible body.
    pub fn evaluate(&self, poly: &ConvexPolygon) -> std::result::Result<f64, String> {
        match &self.objective {
            Objective::Eigenvalue { k, coeff } => {
                let spectrum =
                    eigenvalues(poly, coeff, *k, self.h).map_err(|e| e.to_string())?;
                Ok(spectrum.eigenvalues[*k - 1])
            }
            Objective::SourceIntegral { coeff, f, j } => {
                let sol = solve_source(poly, coeff, f, self.h).map_err(|e| e.to_string())?;
                integral_functional(&sol, j).map_err(|e| e.to_string())
            }
            Objective::BoundaryIntegral { f } => {
                boundary_functional_2d(poly, f).map_err(|e| e.to_string())
            }
        }
    }
}

/// Search diagnostics recorded over every evaluated candidate.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SearchStats {
    pub evaluations: usize,
    pub accepted: usize,
    pub projection_failures: usize,
    /// max |area - m| / m over evaluated candidates
    pub max_volume_error: f64,
    /// min (inradius * perimeter / area) over evaluated candidates; the
    /// convex-body inequality keeps this above 1
    pub min_inradius_ratio: f64,
}

/// Best body found, its value, and the accepted-step trace.
#[derive(Clone, Debug)]
pub struct OptResult {
    pub best: ConvexPolygon,
    pub best_value: f64,
    /// (evaluation index, value) at each accepted step; starts with the
    /// initial body at index 0
    pub trace: Vec<(usize, f64)>,
    pub stats: SearchStats,
}

/// Wire format: exactly {best_value, vertices, trace}.
impl Serialize for OptResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("OptResult", 3)?;
        s.serialize_field("best_value", &self.best_value)?;
        let verts: Vec<[f64; 2]> = self
            .best
            .vertices()
            .iter()
            .map(|p| [p.x, p.y])
            .collect();
        s.serialize_field("vertices", &verts)?;
        let trace: Vec<(usize, f64)> = self.trace.clone();
        s.serialize_field("trace", &trace)?;
        s.end()
    }
}

impl OptResult {
    /// Accepted values must be nonincreasing.
    pub fn trace_is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    /// Trace as CSV with an `iter,value` header.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iter,value\n");
        for (i, v) in &self.trace {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }
}
