use crate::geometry::{
    bonnesen_check, project_to_class, radial_parametrization, ConvexPolygon, Point,
    RadialFunction,
};

use super::{OptResult, OptimizeError, Result, SearchStats, ShapeProblem};

/// Relative area tolerance for the projection of every candidate.
const VOLUME_TOL: f64 = 1e-9;
/// Multiplicative step ladder.
const DELTA_START: f64 = 0.1;
const DELTA_FLOOR: f64 = 1e-3;

/// Minimize the objective over convex subsets of the box with prescribed
/// area, by cyclic coordinate search on the radial samples of the body.
///
/// The start is the centered disk of the prescribed area at the problem's
/// radial resolution. Each candidate scales one radial sample by (1 ± delta),
/// is projected back onto the class (convex hull, area, box), and is accepted
/// only on strict improvement; delta halves from 0.1 after every sweep
/// without improvement and the search stops at the budget or below 1e-3.
pub fn optimize(problem: &ShapeProblem) -> Result<OptResult> {
    problem.validate()?;
    let initial = initial_disk(problem)?;
    let mut stats = SearchStats {
        min_inradius_ratio: f64::INFINITY,
        ..Default::default()
    };

    let mut trace: Vec<(usize, f64)> = Vec::new();
    record_candidate(&initial, problem, &mut stats);
    let mut best_value = match problem.evaluate(&initial) {
        Ok(v) => v,
        Err(message) => {
            return Err(OptimizeError::ObjectiveFailure {
                message,
                evaluations: 1,
                trace,
            })
        }
    };
    stats.evaluations = 1;
    stats.accepted = 1;
    let mut best = initial;
    trace.push((0, best_value));

    let mut radial = match radial_parametrization(&best, problem.n_theta) {
        Ok(r) => r,
        Err(e) => return Err(OptimizeError::Geometry(e)),
    };

    let mut delta = DELTA_START;
    'search: while stats.evaluations < problem.budget && delta >= DELTA_FLOOR {
        let mut improved = false;
        for i in 0..problem.n_theta {
            for sign in [1.0, -1.0] {
                if stats.evaluations >= problem.budget {
                    break 'search;
                }
                let candidate = match project_candidate(problem, &radial, i, sign * delta) {
                    Some(poly) => poly,
                    None => {
                        stats.projection_failures += 1;
                        continue;
                    }
                };
                record_candidate(&candidate, problem, &mut stats);
                stats.evaluations += 1;
                let value = match problem.evaluate(&candidate) {
                    Ok(v) => v,
                    Err(message) => {
                        return Err(OptimizeError::ObjectiveFailure {
                            message,
                            evaluations: stats.evaluations,
                            trace,
                        })
                    }
                };
                if value < best_value {
                    best_value = value;
                    best = candidate;
                    trace.push((stats.evaluations - 1, value));
                    stats.accepted += 1;
                    improved = true;
                    match radial_parametrization(&best, problem.n_theta) {
                        Ok(r) => radial = r,
                        Err(e) => return Err(OptimizeError::Geometry(e)),
                    }
                }
            }
        }
        if !improved {
            delta *= 0.5;
        }
    }

    Ok(OptResult {
        best,
        best_value,
        trace,
        stats,
    })
}

/// Regular n_theta-gon of exactly the prescribed area, centered in the box,
/// pushed through the class projection.
fn initial_disk(problem: &ShapeProblem) -> Result<ConvexPolygon> {
    let n = problem.n_theta;
    let m = problem.volume;
    // polygon area of a regular n-gon of circumradius r: (n/2) r^2 sin(2 pi/n)
    let r = (2.0 * m / (n as f64 * (2.0 * std::f64::consts::PI / n as f64).sin())).sqrt();
    let c = problem.domain.center();
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
            c + Point::new(r * t.cos(), r * t.sin())
        })
        .collect();
    project_to_class(&pts, &problem.domain, m, VOLUME_TOL).map_err(OptimizeError::Geometry)
}

/// One coordinate move: scale radial sample `i` by (1 + step) and project.
fn project_candidate(
    problem: &ShapeProblem,
    radial: &RadialFunction,
    i: usize,
    step: f64,
) -> Option<ConvexPolygon> {
    let mut samples = radial.samples.clone();
    samples[i] *= 1.0 + step;
    let perturbed = RadialFunction {
        center: radial.center,
        samples,
    };
    let pts: Vec<Point> = (0..perturbed.n_theta())
        .map(|j| perturbed.boundary_point(j))
        .collect();
    project_to_class(&pts, &problem.domain, problem.volume, VOLUME_TOL).ok()
}

fn record_candidate(poly: &ConvexPolygon, problem: &ShapeProblem, stats: &mut SearchStats) {
    let volume_error = (poly.area() - problem.volume).abs() / problem.volume;
    stats.max_volume_error = stats.max_volume_error.max(volume_error);
    let report = bonnesen_check(poly);
    let ratio = report.inradius * report.perimeter / report.area;
    stats.min_inradius_ratio = stats.min_inradius_ratio.min(ratio);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::geometry::Rect;
    use crate::optimizer::Objective;

    fn perimeter_problem(budget: usize) -> ShapeProblem {
        ShapeProblem {
            objective: Objective::BoundaryIntegral {
                f: parse_expr("1").unwrap(),
            },
            domain: Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap(),
            volume: 2.0,
            n_theta: 24,
            h: 0.1,
            budget,
            seed: 1,
        }
    }

    #[test]
    fn budget_one_returns_initial_disk() {
        let problem = perimeter_problem(1);
        let result = optimize(&problem).unwrap();
        assert_eq!(result.stats.evaluations, 1);
        assert_eq!(result.trace.len(), 1);
        // initial body: area-2 regular 24-gon centered at (2, 2)
        assert!((result.best.area() - 2.0).abs() <= 1e-9 * 2.0);
        let c = result.best.centroid();
        assert!((c.x - 2.0).abs() < 1e-9 && (c.y - 2.0).abs() < 1e-9);
    }

    #[test]
    fn perimeter_objective_stays_near_isoperimetric_bound() {
        let problem = perimeter_problem(120);
        let result = optimize(&problem).unwrap();
        let bound = 2.0 * (std::f64::consts::PI * problem.volume).sqrt();
        assert!(result.best_value >= bound - 1e-9);
        assert!(result.best_value <= bound * 1.02, "{}", result.best_value);
        assert!(result.trace_is_monotone());
        assert!(result.stats.max_volume_error <= 1e-6);
        assert!(result.stats.min_inradius_ratio > 1.0);
    }

    #[test]
    fn runs_are_bit_identical() {
        let problem = perimeter_problem(60);
        let a = optimize(&problem).unwrap();
        let b = optimize(&problem).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn infeasible_volume_propagates() {
        let mut problem = perimeter_problem(5);
        problem.volume = 100.0;
        assert!(matches!(
            optimize(&problem),
            Err(OptimizeError::InvalidParameter(_))
        ));
    }
}
