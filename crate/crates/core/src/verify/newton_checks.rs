use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::expr::parse_expr;
use crate::functionals::{
    boundary_functional_2d, resistance_boundary_axisym, resistance_profile, RadialProfile,
    StreamDirection,
};
use crate::geometry::{sampling, ConvexPolygon, Point, Rect};
use crate::optimizer::{newton_optimize_profile, project_profile};

use super::{check, CheckResult, Suite};

use std::f64::consts::PI;

pub fn flat_disk_resistance(_seed: u64) -> CheckResult {
    let p = RadialProfile::flat(1.0, 1.0, 1000);
    let r = resistance_profile(&p).expect("flat profile");
    let f = resistance_boundary_axisym(&p, StreamDirection::default()).expect("flat boundary");
    check(
        "newton.flat_disk_resistance",
        Suite::Newton,
        (r - PI).abs() < 1e-12 && (f - PI).abs() < 1e-12,
        format!("profile form {r}, boundary form {f}, exact pi"),
    )
}

pub fn cone_resistance(_seed: u64) -> CheckResult {
    let unit = resistance_profile(&RadialProfile::cone(1.0, 1.0, 1000)).expect("unit cone");
    let tall = resistance_profile(&RadialProfile::cone(1.0, 2.0, 1000)).expect("tall cone");
    let e1 = (unit - PI / 2.0).abs();
    let e2 = (tall - PI / 5.0).abs();
    check(
        "newton.cone_resistance",
        Suite::Newton,
        e1 < 1e-6 && e2 < 1e-6,
        format!("cone M=1: {unit} (err {e1:.2e}), M=2: {tall} (err {e2:.2e})"),
    )
}

pub fn hemisphere_boundary(_seed: u64) -> CheckResult {
    let n_r = 2000;
    let heights: Vec<f64> = (0..=n_r)
        .map(|i| {
            let r = i as f64 / n_r as f64;
            (1.0 - r * r).max(0.0).sqrt()
        })
        .collect();
    let p = RadialProfile {
        radius: 1.0,
        height_bound: 1.0,
        heights,
    };
    let f = resistance_boundary_axisym(&p, StreamDirection::default()).expect("hemisphere");
    check(
        "newton.hemisphere_boundary",
        Suite::Newton,
        (f - PI / 2.0).abs() < 1e-3,
        format!("hemisphere boundary form {f}, exact pi/2 (err {:.2e})", (f - PI / 2.0).abs()),
    )
}

/// Random valid profile: random heights pushed through the constraint
/// projection.
fn random_profile(rng: &mut ChaCha8Rng, n_r: usize) -> RadialProfile {
    let m: f64 = rng.gen_range(0.3..2.0);
    let radius: f64 = rng.gen_range(0.5..2.0);
    let heights: Vec<f64> = (0..=n_r).map(|_| rng.gen_range(0.0..m)).collect();
    project_profile(heights, m, radius, n_r)
}

/// The base-integral and boundary-integral forms of the resistance agree to
/// 1e-6 relative on random profiles (they are algebraically equal; the two
/// routes differ only in rounding).
pub fn profile_boundary_agreement(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xab);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = random_profile(&mut rng, 400);
        let a = resistance_profile(&p).expect("profile form");
        let b = resistance_boundary_axisym(&p, StreamDirection::default()).expect("boundary form");
        worst = worst.max((a - b).abs() / a.abs().max(1e-300));
    }
    check(
        "newton.profile_boundary_agreement",
        Suite::Newton,
        worst <= 1e-6,
        format!("max relative disagreement over 20 profiles = {worst:.3e}"),
    )
}

/// Resistance functionals are nonnegative and bounded by the flat-disk value
/// pi R^2.
pub fn positivity_flat_bound(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xbd);
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..20 {
        let p = random_profile(&mut rng, 300);
        let bound = PI * p.radius * p.radius;
        let a = resistance_profile(&p).expect("profile form");
        let b = resistance_boundary_axisym(&p, StreamDirection::default()).expect("boundary form");
        if !(a >= 0.0 && b >= 0.0 && a <= bound + 1e-12 && b <= bound + 1e-12) {
            ok = false;
            detail = format!("trial {trial}: values ({a}, {b}) outside [0, {bound}]");
        }
    }
    if detail.is_empty() {
        detail = "0 <= resistance <= pi R^2 on 20 random profiles".into();
    }
    check("newton.positivity_flat_bound", Suite::Newton, ok, detail)
}

/// The optimized profile beats the cone, keeps a flat nose, and its sloped
/// cells obey the discrete slope law |s| >= 0.95.
pub fn optimized_profile_slope_law(seed: u64) -> CheckResult {
    let p = newton_optimize_profile(1.0, 1.0, 200, 20000, seed).expect("profile descent");
    let value = resistance_profile(&p).expect("optimized profile");
    let below_cone = value < PI / 2.0;

    let u0 = p.heights[0];
    let dr = p.dr();
    let mut flat_cells = 0usize;
    for w in p.heights.windows(2) {
        if (w[0] - w[1]).abs() <= 1e-6 && (u0 - w[1]) <= 1e-5 {
            flat_cells += 1;
        } else {
            break;
        }
    }
    let flat_radius = flat_cells as f64 * dr;
    let slopes = p.slopes();
    let min_sloped = slopes
        .iter()
        .filter(|s| s.abs() > 0.01)
        .map(|s| s.abs())
        .fold(f64::INFINITY, f64::min);
    check(
        "newton.optimized_profile_slope_law",
        Suite::Newton,
        below_cone && flat_radius >= 0.2 && min_sloped >= 0.95,
        format!(
            "value {value} (cone pi/2 = {:.6}), flat radius {flat_radius}, min sloped |s| = {min_sloped}",
            PI / 2.0
        ),
    )
}

/// Lower semicontinuity experiment: along uniformly converging domain
/// sequences the boundary functional with the cube-of-positive-part
/// integrand does not drop below the limit value (1e-3 tolerance).
pub fn boundary_lsc(seed: u64) -> CheckResult {
    let cube = "(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))";
    let f = parse_expr(cube).unwrap();
    let b = Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap();
    let mut rng = sampling::rng_from_seed(seed ^ 0x15c);
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..10 {
        let poly = sampling::random_convex_polygon(&mut rng, &b, 12);
        let limit_value = boundary_functional_2d(&poly, &f).expect("limit value");
        // directional jitter, shrinking to zero
        let dirs: Vec<Point> = poly
            .vertices()
            .iter()
            .map(|_| {
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let mut liminf_tail = f64::INFINITY;
        for n in 5..=9 {
            let eps = 0.5f64.powi(n);
            let pts: Vec<Point> = poly
                .vertices()
                .iter()
                .zip(&dirs)
                .map(|(&v, &d)| v + d * eps)
                .collect();
            let jp = ConvexPolygon::hull_of(&pts).expect("jittered hull");
            let v = boundary_functional_2d(&jp, &f).expect("jittered value");
            liminf_tail = liminf_tail.min(v);
        }
        if liminf_tail < limit_value - 1e-3 {
            ok = false;
            detail = format!(
                "trial {trial}: tail infimum {liminf_tail} drops below limit {limit_value} - 1e-3"
            );
        }
    }
    if detail.is_empty() {
        detail = "tail infimum >= limit - 1e-3 on 10 jitter sequences".into();
    }
    check("newton.boundary_lsc", Suite::Newton, ok, detail)
}
