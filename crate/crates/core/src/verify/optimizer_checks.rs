use crate::expr::parse_expr;
use crate::geometry::{hausdorff_distance, project_to_class, sampling, ConvexPolygon, Point, Rect};
use crate::optimizer::{blaschke_select, optimize, Objective, ShapeProblem};

use super::{check, CheckResult, Suite};

fn perimeter_problem(seed: u64, budget: usize) -> ShapeProblem {
    ShapeProblem {
        objective: Objective::BoundaryIntegral {
            f: parse_expr("1").unwrap(),
        },
        domain: Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap(),
        volume: 2.5,
        n_theta: 24,
        h: 0.1,
        budget,
        seed,
    }
}

/// Every evaluated candidate stayed in the admissible class: area within
/// 1e-6 of the target (relative) and convex by construction.
pub fn feasibility_preservation(seed: u64) -> CheckResult {
    let result = optimize(&perimeter_problem(seed, 150)).expect("search");
    check(
        "optimizer.feasibility_preservation",
        Suite::Optimizer,
        result.stats.max_volume_error <= 1e-6,
        format!(
            "max relative volume error over {} evaluations = {:.3e}",
            result.stats.evaluations, result.stats.max_volume_error
        ),
    )
}

/// Candidates keep the inradius floor rho > area/perimeter (the convex-body
/// inequality): the recorded minimum of rho * perimeter / area stays above 1.
pub fn inradius_floor(seed: u64) -> CheckResult {
    let result = optimize(&perimeter_problem(seed, 150)).expect("search");
    check(
        "optimizer.inradius_floor",
        Suite::Optimizer,
        result.stats.min_inradius_ratio > 1.0,
        format!(
            "min inradius * perimeter / area over candidates = {:.6}",
            result.stats.min_inradius_ratio
        ),
    )
}

/// Accepted objective values are nonincreasing.
pub fn monotone_trace(seed: u64) -> CheckResult {
    let result = optimize(&perimeter_problem(seed, 200)).expect("search");
    check(
        "optimizer.monotone_trace",
        Suite::Optimizer,
        result.trace_is_monotone(),
        format!("trace of {} accepted steps", result.trace.len()),
    )
}

/// Identical problems give byte-identical serialized results.
pub fn determinism(seed: u64) -> CheckResult {
    let a = optimize(&perimeter_problem(seed, 80)).expect("first run");
    let b = optimize(&perimeter_problem(seed, 80)).expect("second run");
    let ja = serde_json::to_string(&a).expect("serialize");
    let jb = serde_json::to_string(&b).expect("serialize");
    check(
        "optimizer.determinism",
        Suite::Optimizer,
        ja == jb,
        format!("payload length {} bytes", ja.len()),
    )
}

/// Selection from 100 random admissible bodies stays nonempty down the
/// ladder, is nested, and every kept pair obeys the Hausdorff bound.
pub fn blaschke_nesting(seed: u64) -> CheckResult {
    let d = Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap();
    let m = std::f64::consts::PI;
    let mut rng = sampling::rng_from_seed(seed ^ 0xb1a5);
    let bodies: Vec<ConvexPolygon> = (0..100)
        .map(|_| loop {
            let raw = sampling::random_convex_polygon(&mut rng, &d, 10);
            if let Ok(p) = project_to_class(raw.vertices(), &d, m, 1e-9) {
                break p;
            }
        })
        .collect();
    let ladder = [0.5, 0.25, 0.125, 0.0625];
    let sel = match blaschke_select(&bodies, &ladder) {
        Ok(s) => s,
        Err(e) => {
            return check(
                "optimizer.blaschke_nesting",
                Suite::Optimizer,
                false,
                format!("selection failed: {e}"),
            )
        }
    };
    let mut ok = sel.levels.len() == ladder.len();
    let mut detail = String::new();
    for w in sel.levels.windows(2) {
        for i in &w[1].indices {
            if !w[0].indices.contains(i) {
                ok = false;
                detail = "levels are not nested".into();
            }
        }
    }
    for level in &sel.levels {
        if level.indices.is_empty() {
            ok = false;
            detail = format!("empty level at eps = {}", level.epsilon);
        }
        for &i in &level.indices {
            for &j in &level.indices {
                if hausdorff_distance(&bodies[i], &bodies[j]) > level.epsilon + 1e-12 {
                    ok = false;
                    detail = format!(
                        "pair ({i}, {j}) exceeds eps = {} at its level",
                        level.epsilon
                    );
                }
            }
        }
    }
    if detail.is_empty() {
        let sizes: Vec<usize> = sel.levels.iter().map(|l| l.indices.len()).collect();
        detail = format!("cluster sizes down the ladder: {sizes:?}");
    }
    check("optimizer.blaschke_nesting", Suite::Optimizer, ok, detail)
}
