use rand::Rng;

use crate::geometry::{
    angle_between, bonnesen_check, contains, edge_normals, hausdorff_distance, inradius_center,
    minkowski_dilate, radial_parametrization, sampling, scale_about, ConvexPolygon, Point, Rect,
    EPS_GEOM,
};

use super::{check, CheckResult, Suite};

fn arena() -> Rect {
    Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0)).unwrap()
}

/// Nested perturbations of `poly`: fixed per-vertex directions scaled by each
/// epsilon, hulled. Smooth in epsilon, so ladder quantities decay cleanly.
fn directional_jitter(
    rng: &mut rand_chacha::ChaCha8Rng,
    poly: &ConvexPolygon,
    epsilons: &[f64],
) -> Vec<ConvexPolygon> {
    let dirs: Vec<Point> = poly
        .vertices()
        .iter()
        .map(|_| {
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            Point::new(t.cos(), t.sin())
        })
        .collect();
    epsilons
        .iter()
        .map(|&eps| {
            let pts: Vec<Point> = poly
                .vertices()
                .iter()
                .zip(&dirs)
                .map(|(&v, &d)| v + d * eps)
                .collect();
            ConvexPolygon::hull_of(&pts).expect("jittered hull")
        })
        .collect()
}

/// area < inradius * perimeter, strictly, on 100 random convex bodies.
pub fn bonnesen_positive_slack(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed);
    let b = arena();
    let mut min_slack = f64::INFINITY;
    for _ in 0..100 {
        let poly = sampling::random_convex_polygon(&mut rng, &b, 12);
        let report = bonnesen_check(&poly);
        min_slack = min_slack.min(report.slack);
    }
    check(
        "geometry.bonnesen_positive_slack",
        Suite::Geometry,
        min_slack > 0.0,
        format!("min slack over 100 bodies = {min_slack:.6e}"),
    )
}

/// Set inclusion implies perimeter order, on 50 nested pairs.
pub fn perimeter_monotone_inclusion(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x9e3779b9);
    let b = arena();
    let mut worst_gap = f64::NEG_INFINITY;
    let mut all_contained = true;
    for _ in 0..50 {
        let outer = sampling::random_convex_polygon(&mut rng, &b, 12);
        let (c, _) = inradius_center(&outer);
        let alpha = rng.gen_range(0.3..0.95);
        let inner = scale_about(&outer, c, alpha).unwrap();
        all_contained &= contains(&outer, &inner);
        worst_gap = worst_gap.max(inner.perimeter() - outer.perimeter());
    }
    check(
        "geometry.perimeter_monotone_inclusion",
        Suite::Geometry,
        all_contained && worst_gap <= 0.0,
        format!("max perimeter(inner) - perimeter(outer) = {worst_gap:.3e}"),
    )
}

/// Areas and perimeters converge along uniformly converging sequences, with
/// gaps bounded linearly in the perturbation size.
pub fn measure_convergence(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x51ed);
    let b = arena();
    let epsilons: Vec<f64> = (0..7).map(|n| 1.0 / (1 << n) as f64).collect();
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..10 {
        let poly = sampling::random_convex_polygon(&mut rng, &b, 12);
        let jittered = directional_jitter(&mut rng, &poly, &epsilons);
        let c_lin = 3.0 * (poly.perimeter() + poly.len() as f64);
        for (eps, j) in epsilons.iter().zip(&jittered) {
            let gap_area = (j.area() - poly.area()).abs();
            let gap_perim = (j.perimeter() - poly.perimeter()).abs();
            if gap_area > c_lin * eps || gap_perim > c_lin * eps {
                ok = false;
                detail = format!(
                    "trial {trial}: gaps ({gap_area:.3e}, {gap_perim:.3e}) exceed C*eps = {:.3e}",
                    c_lin * eps
                );
            }
        }
        // the finest level must be close in both measures
        let last = jittered.last().unwrap();
        let eps_last = *epsilons.last().unwrap();
        if (last.area() - poly.area()).abs() > c_lin * eps_last {
            ok = false;
        }
    }
    if detail.is_empty() {
        detail = "area/perimeter gaps bounded by C*eps down to eps = 1/64 on 10 bodies".into();
    }
    check(
        "geometry.measure_convergence",
        Suite::Geometry,
        ok,
        detail,
    )
}

/// Hausdorff distance behaves as a metric on valid polygons.
pub fn hausdorff_metric(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xd15f);
    let b = arena();
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..50 {
        let p = sampling::random_convex_polygon(&mut rng, &b, 10);
        let q = sampling::random_convex_polygon(&mut rng, &b, 10);
        let r = sampling::random_convex_polygon(&mut rng, &b, 10);
        let dpq = hausdorff_distance(&p, &q);
        let dqp = hausdorff_distance(&q, &p);
        if dpq != dqp {
            ok = false;
            detail = format!("trial {trial}: symmetry violated: {dpq} vs {dqp}");
            break;
        }
        let dpp = hausdorff_distance(&p, &p);
        if dpp > EPS_GEOM * p.diameter() {
            ok = false;
            detail = format!("trial {trial}: self-distance {dpp:.3e}");
            break;
        }
        let dpr = hausdorff_distance(&p, &r);
        let dqr = hausdorff_distance(&q, &r);
        let scale = dpq.max(dqr).max(dpr).max(1e-30);
        if dpr > dpq + dqr + 1e-12 * scale {
            ok = false;
            detail = format!(
                "trial {trial}: triangle inequality violated by {:.3e}",
                dpr - dpq - dqr
            );
            break;
        }
    }
    if detail.is_empty() {
        detail = "symmetry, identity, triangle inequality on 50 random triples".into();
    }
    check("geometry.hausdorff_metric", Suite::Geometry, ok, detail)
}

/// poly is inside its dilation, and the dilation is inside the homothety by
/// (1 + eps/rho) about the Chebyshev center, for eps in (0, rho].
pub fn dilation_inclusion(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xd11a);
    let b = arena();
    let mut ok = true;
    let mut detail = String::new();
    'outer: for trial in 0..50 {
        let poly = sampling::random_convex_polygon(&mut rng, &b, 10);
        let (center, rho) = inradius_center(&poly);
        for frac in [0.1, 0.5, 1.0] {
            let eps = frac * rho;
            let dilated = minkowski_dilate(&poly, eps, 16).unwrap();
            let scaled = scale_about(&poly, center, 1.0 + eps / rho).unwrap();
            if !contains(&dilated, &poly) || !contains(&scaled, &dilated) {
                ok = false;
                detail = format!("trial {trial}, eps = {eps:.3}: inclusion chain broken");
                break 'outer;
            }
        }
    }
    if detail.is_empty() {
        detail = "poly in dilation in homothety, 50 bodies x 3 radii".into();
    }
    check("geometry.dilation_inclusion", Suite::Geometry, ok, detail)
}

/// Outward normals converge along uniformly converging boundaries: matched
/// edge-midpoint normals approach the limit normals as the jitter vanishes.
pub fn normal_convergence(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x0a0a);
    // a 48-gon disk: every boundary point is in the smooth region
    let n = 48;
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * (i as f64) / (n as f64);
            Point::new(2.0 + t.cos(), 2.0 + t.sin())
        })
        .collect();
    let poly = ConvexPolygon::from_points(&pts).unwrap();
    let epsilons: Vec<f64> = (3..=10).map(|k| 0.5f64.powi(k)).collect();
    let jittered = directional_jitter(&mut rng, &poly, &epsilons);

    let base_normals = edge_normals(&poly);
    let verts = poly.vertices();
    let sample_ids: Vec<usize> = (0..8).map(|i| i * n / 8).collect();
    let mut mean_angles = Vec::with_capacity(jittered.len());
    for jp in &jittered {
        let jn = edge_normals(jp);
        let jverts = jp.vertices();
        let mut total = 0.0;
        for &e in &sample_ids {
            let x = (verts[e] + verts[(e + 1) % n]) * 0.5;
            let nu = base_normals[e].0;
            // nearest edge midpoint of the perturbed body
            let (mut best_d, mut best_angle) = (f64::INFINITY, 0.0);
            for (j, (nu_j, _)) in jn.iter().enumerate() {
                let mid = (jverts[j] + jverts[(j + 1) % jverts.len()]) * 0.5;
                let d = mid.distance(x);
                if d < best_d {
                    best_d = d;
                    best_angle = angle_between(nu, *nu_j);
                }
            }
            total += best_angle;
        }
        mean_angles.push(total / sample_ids.len() as f64);
    }
    let first = mean_angles[0];
    let last = *mean_angles.last().unwrap();
    let decreasing = mean_angles.windows(2).all(|w| w[1] <= w[0] + 0.02);
    let ok = decreasing && last <= 0.05 && last <= first;
    check(
        "geometry.normal_convergence",
        Suite::Geometry,
        ok,
        format!(
            "mean matched-normal angle: {:.4} rad at eps = 1/8 down to {:.4} rad at eps = 1/1024",
            first, last
        ),
    )
}

/// Radial reconstruction error is nonincreasing along the dyadic resolution
/// ladder 16, 32, ..., 512.
pub fn radial_reconstruction_ladder(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x4ad1);
    let b = arena();
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..10 {
        let poly = sampling::random_convex_polygon(&mut rng, &b, 10);
        let mut last = f64::INFINITY;
        for n in [16usize, 32, 64, 128, 256, 512] {
            let r = radial_parametrization(&poly, n).unwrap();
            let d = hausdorff_distance(&poly, &r.reconstruct().unwrap());
            if d > last + 1e-12 {
                ok = false;
                detail = format!("trial {trial}: error rose from {last:.3e} to {d:.3e} at n = {n}");
            }
            last = d;
        }
    }
    if detail.is_empty() {
        detail = "reconstruction error nonincreasing over n = 16..512 on 10 bodies".into();
    }
    check(
        "geometry.radial_reconstruction_ladder",
        Suite::Geometry,
        ok,
        detail,
    )
}
