use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{parse_expr, Bindings, CoefficientField};
use crate::fem::{eigenvalues, integral_functional, solve_source};
use crate::geometry::{
    inradius_center, sampling, scale_about, ConvexPolygon, Point, Rect,
};

use super::{check, CheckResult, Suite};

fn arena() -> Rect {
    Rect::new(Point::new(0.25, 0.25), Point::new(3.75, 3.75)).unwrap()
}

fn unit_square() -> ConvexPolygon {
    ConvexPolygon::from_points(&[
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])
    .unwrap()
}

fn disk(n: usize, radius: f64, cx: f64, cy: f64) -> ConvexPolygon {
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * (i as f64) / (n as f64);
            Point::new(cx + radius * t.cos(), cy + radius * t.sin())
        })
        .collect();
    ConvexPolygon::from_points(&pts).unwrap()
}

/// A random convex body that meshes comfortably: regenerated until its
/// inradius is a healthy fraction of its diameter.
fn chunky_polygon(rng: &mut ChaCha8Rng, points: usize) -> ConvexPolygon {
    let b = arena();
    loop {
        let poly = sampling::random_convex_polygon(rng, &b, points);
        let (_, rho) = inradius_center(&poly);
        if rho > 0.18 * poly.diameter() {
            return poly;
        }
    }
}

fn directional_jitter(
    rng: &mut ChaCha8Rng,
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

// ---------------------------------------------------------------------------
// expression-language checks
// ---------------------------------------------------------------------------

/// Random expression tree paired with an independent evaluator. The
/// generator produces the source text and the expected value side by side,
/// so the oracle never touches the parser.
fn random_expr(rng: &mut ChaCha8Rng, depth: usize, bindings: &[(&str, f64)]) -> (String, f64) {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        if rng.gen_bool(0.5) {
            let v = bindings[rng.gen_range(0..bindings.len())];
            (v.0.to_string(), v.1)
        } else {
            let x: f64 = rng.gen_range(-4.0..4.0);
            // print-parse exactness: emit the shortest round-trip form
            (format!("({x})"), x)
        }
    } else {
        match rng.gen_range(0..6) {
            0 => {
                let (a, va) = random_expr(rng, depth - 1, bindings);
                let (b, vb) = random_expr(rng, depth - 1, bindings);
                (format!("({a}+{b})"), va + vb)
            }
            1 => {
                let (a, va) = random_expr(rng, depth - 1, bindings);
                let (b, vb) = random_expr(rng, depth - 1, bindings);
                (format!("({a}-{b})"), va - vb)
            }
            2 => {
                let (a, va) = random_expr(rng, depth - 1, bindings);
                let (b, vb) = random_expr(rng, depth - 1, bindings);
                (format!("({a}*{b})"), va * vb)
            }
            3 => {
                let (a, va) = random_expr(rng, depth - 1, bindings);
                let (b, vb) = random_expr(rng, depth - 1, bindings);
                // keep the denominator away from zero
                (format!("({a}/(1+abs({b})))"), va / (1.0 + vb.abs()))
            }
            4 => {
                let (a, va) = random_expr(rng, depth - 1, bindings);
                (format!("sin({a})"), va.sin())
            }
            _ => {
                let (a, va) = random_expr(rng, depth - 1, bindings);
                (format!("sqrt(abs({a}))"), va.abs().sqrt())
            }
        }
    }
}

pub fn expr_print_parse_roundtrip(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xe192);
    let bindings = [("x1", 0.3), ("x2", -1.2), ("u", 2.5), ("ux", 0.7), ("uy", -0.4)];
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..500 {
        let (src, _) = random_expr(&mut rng, 4, &bindings);
        let once = match parse_expr(&src) {
            Ok(e) => e.to_string(),
            Err(e) => {
                ok = false;
                detail = format!("trial {trial}: generated source failed to parse: {e}");
                break;
            }
        };
        let twice = parse_expr(&once).map(|e| e.to_string()).ok();
        if twice.as_deref() != Some(once.as_str()) {
            ok = false;
            detail = format!("trial {trial}: printing is not a fixed point for `{src}`");
            break;
        }
    }
    if detail.is_empty() {
        detail = "print-parse-print fixed on 500 random expressions".into();
    }
    check(
        "spectral.expr_print_parse_roundtrip",
        Suite::Spectral,
        ok,
        detail,
    )
}

pub fn expr_eval_reference(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xe4a1);
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..1000 {
        let binding_vals = [
            ("x1", rng.gen_range(-2.0..2.0)),
            ("x2", rng.gen_range(-2.0..2.0)),
            ("u", rng.gen_range(-2.0..2.0)),
            ("ux", rng.gen_range(-2.0..2.0)),
            ("uy", rng.gen_range(-2.0..2.0)),
        ];
        let (src, expected) = random_expr(&mut rng, 4, &binding_vals);
        let mut b = Bindings::new();
        for (name, v) in binding_vals {
            b = b.set(name, v);
        }
        let got = match parse_expr(&src).and_then(|e| e.eval(&b)) {
            Ok(v) => v,
            Err(e) => {
                ok = false;
                detail = format!("trial {trial}: `{src}` failed to evaluate: {e}");
                break;
            }
        };
        let scale = expected.abs().max(1.0);
        if (got - expected).abs() > 1e-12 * scale {
            ok = false;
            detail = format!(
                "trial {trial}: `{src}` evaluated to {got}, reference {expected}"
            );
            break;
        }
    }
    if detail.is_empty() {
        detail = "parser evaluation matches the generating template on 1000 expressions".into();
    }
    check(
        "spectral.expr_eval_reference",
        Suite::Spectral,
        ok,
        detail,
    )
}

// ---------------------------------------------------------------------------
// eigenvalue checks
// ---------------------------------------------------------------------------

pub fn square_eigen_oracle(_seed: u64) -> CheckResult {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let exact = [2.0 * pi2, 5.0 * pi2, 5.0 * pi2];
    let s = eigenvalues(&unit_square(), &CoefficientField::laplacian(), 3, 0.02)
        .expect("square eigensolve");
    let max_rel = s
        .eigenvalues
        .iter()
        .zip(exact)
        .map(|(l, e)| ((l - e) / e).abs())
        .fold(0.0, f64::max);
    check(
        "spectral.square_eigen_oracle",
        Suite::Spectral,
        max_rel < 0.01,
        format!(
            "lambda = {:?} vs (2, 5, 5) pi^2; max relative error {max_rel:.3e}",
            s.eigenvalues
        ),
    )
}

pub fn disk_eigen_oracle(_seed: u64) -> CheckResult {
    let j01 = 2.404825557695773_f64;
    let exact = j01 * j01;
    let s = eigenvalues(&disk(256, 1.0, 0.0, 0.0), &CoefficientField::laplacian(), 1, 0.02)
        .expect("disk eigensolve");
    let rel = ((s.eigenvalues[0] - exact) / exact).abs();
    check(
        "spectral.disk_eigen_oracle",
        Suite::Spectral,
        rel < 0.01,
        format!(
            "lambda1 = {} vs j01^2 = {exact}; relative error {rel:.3e}",
            s.eigenvalues[0]
        ),
    )
}

/// Eigenvalues do not increase when the domain grows (50 nested pairs,
/// k <= 5, 2% discretization slack).
pub fn monotonicity_inclusion(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x303);
    let lap = CoefficientField::laplacian();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let outer = chunky_polygon(&mut rng, 10);
        let (c, _) = inradius_center(&outer);
        let alpha = rng.gen_range(0.55..0.9);
        let inner = scale_about(&outer, c, alpha).unwrap();
        let h = outer.diameter() / 18.0;
        let lo = eigenvalues(&outer, &lap, 5, h).expect("outer eigensolve");
        let li = eigenvalues(&inner, &lap, 5, h.min(inner.diameter() / 4.0))
            .expect("inner eigensolve");
        for k in 0..5 {
            // require lambda_k(inner) >= lambda_k(outer) up to slack
            let violation = (lo.eigenvalues[k] - li.eigenvalues[k]) / lo.eigenvalues[k];
            worst = worst.max(violation);
        }
    }
    check(
        "spectral.monotonicity_inclusion",
        Suite::Spectral,
        worst <= 0.02,
        format!("max relative violation of inclusion monotonicity = {worst:.3e} (slack 0.02)"),
    )
}

/// lambda_1(2 Omega) * 4 = lambda_1(Omega) within 0.5% for the Laplacian,
/// on 50 random bodies with independent meshes.
pub fn homogeneity_scaling(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x40);
    let lap = CoefficientField::laplacian();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let poly = chunky_polygon(&mut rng, 10);
        let (c, _) = inradius_center(&poly);
        let doubled = scale_about(&poly, c, 2.0).unwrap();
        let h = poly.diameter() / 40.0;
        let l1 = eigenvalues(&poly, &lap, 1, h).expect("base eigensolve").eigenvalues[0];
        let l2 = eigenvalues(&doubled, &lap, 1, h)
            .expect("doubled eigensolve")
            .eigenvalues[0];
        let rel = (4.0 * l2 / l1 - 1.0).abs();
        worst = worst.max(rel);
    }
    check(
        "spectral.homogeneity_scaling",
        Suite::Spectral,
        worst <= 0.005,
        format!("max |4 lambda(2 Omega)/lambda(Omega) - 1| = {worst:.3e} (tolerance 5e-3)"),
    )
}

/// Two-sided eigenvalue bracket (1 + t eps)^{+-2} with t = 1/inradius along
/// uniformly converging perturbations, within 2% discretization slack.
pub fn continuity_bracket(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xcb);
    let lap = CoefficientField::laplacian();
    let mut ok = true;
    let mut detail = String::new();
    'outer: for trial in 0..10 {
        let poly = chunky_polygon(&mut rng, 10);
        let (_, rho) = inradius_center(&poly);
        let t = 1.0 / rho;
        let h = poly.diameter() / 24.0;
        let base = eigenvalues(&poly, &lap, 3, h).expect("base eigensolve");
        let epsilons: Vec<f64> = (2..=6).map(|n| 0.5f64.powi(n)).collect();
        let jittered = directional_jitter(&mut rng, &poly, &epsilons);
        for (eps, jp) in epsilons.iter().zip(&jittered) {
            let js = eigenvalues(jp, &lap, 3, h).expect("jittered eigensolve");
            for k in 0..3 {
                let lk = base.eigenvalues[k];
                let slack = 0.02 * lk;
                let factor = (1.0 + t * eps) * (1.0 + t * eps);
                let lo = lk / factor - slack;
                let hi = lk * factor + slack;
                let lj = js.eigenvalues[k];
                if lj < lo || lj > hi {
                    ok = false;
                    detail = format!(
                        "trial {trial}, eps = {eps}: lambda_{} = {lj} outside [{lo}, {hi}]",
                        k + 1
                    );
                    break 'outer;
                }
            }
        }
    }
    if detail.is_empty() {
        detail = "bracket held for 10 bodies x 5 jitter levels x 3 eigenvalues".into();
    }
    check("spectral.continuity_bracket", Suite::Spectral, ok, detail)
}

/// With continuous non-constant coefficients the first eigenvalue still
/// converges along uniformly converging domains; the gap decays
/// monotonically once the perturbation is below 1/8.
pub fn nonconstant_coeff_continuity(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x2c);
    let coeff =
        CoefficientField::from_strings("1+0.5*x1*x1", "0", "1+0.5*x1*x1", None, 1.0).unwrap();
    let poly = chunky_polygon(&mut rng, 9);
    let h = poly.diameter() / 24.0;
    let base = eigenvalues(&poly, &coeff, 1, h).expect("base eigensolve").eigenvalues[0];
    let epsilons: Vec<f64> = (1..=8).map(|n| 0.5f64.powi(n)).collect();
    let jittered = directional_jitter(&mut rng, &poly, &epsilons);
    let gaps: Vec<f64> = jittered
        .iter()
        .map(|jp| {
            let l = eigenvalues(jp, &coeff, 1, h).expect("jittered eigensolve").eigenvalues[0];
            (l - base).abs()
        })
        .collect();
    // monotone decay from level 3 on, and a small terminal gap
    let tail_monotone = gaps[2..].windows(2).all(|w| w[1] <= w[0] * 1.05 + 1e-9);
    let small_tail = gaps[gaps.len() - 1] <= 0.02 * base;
    check(
        "spectral.nonconstant_coeff_continuity",
        Suite::Spectral,
        tail_monotone && small_tail,
        format!("gaps along eps = 2^-1..2^-8: {gaps:?}"),
    )
}

/// Adding c0 = 1 shifts every eigenvalue by exactly +1 for the Laplacian.
pub fn zero_order_shift(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0x0c);
    let poly = chunky_polygon(&mut rng, 10);
    let h = poly.diameter() / 20.0;
    let plain = CoefficientField::laplacian();
    let shifted = CoefficientField::from_strings("1", "0", "1", Some("1"), 1.0).unwrap();
    let a = eigenvalues(&poly, &plain, 3, h).expect("plain eigensolve");
    let b = eigenvalues(&poly, &shifted, 3, h).expect("shifted eigensolve");
    let mut worst = 0.0f64;
    let mut ordered = true;
    for k in 0..3 {
        let expected = a.eigenvalues[k] + 1.0;
        worst = worst.max(((b.eigenvalues[k] - expected) / expected).abs());
        ordered &= b.eigenvalues[k] >= a.eigenvalues[k];
    }
    check(
        "spectral.zero_order_shift",
        Suite::Spectral,
        ordered && worst <= 1e-6,
        format!("max relative deviation from lambda + 1: {worst:.3e}"),
    )
}

/// lambda_k(D) <= lambda_k(Omega) <= lambda_k(B_rho) within slack, where
/// B_rho is the inscribed ball.
pub fn domain_bracket(seed: u64) -> CheckResult {
    let mut rng = sampling::rng_from_seed(seed ^ 0xdb);
    let lap = CoefficientField::laplacian();
    let d_poly = Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 4.0))
        .unwrap()
        .to_polygon();
    let ld = eigenvalues(&d_poly, &lap, 3, 0.2).expect("box eigensolve");
    let mut ok = true;
    let mut detail = String::new();
    for trial in 0..10 {
        let poly = chunky_polygon(&mut rng, 10);
        let (c, rho) = inradius_center(&poly);
        let ball = disk(64, rho, c.x, c.y);
        let h = poly.diameter() / 20.0;
        let lo = eigenvalues(&poly, &lap, 3, h).expect("body eigensolve");
        let lb = eigenvalues(&ball, &lap, 3, (2.0 * rho) / 20.0).expect("ball eigensolve");
        for k in 0..3 {
            let slack = 0.02 * lo.eigenvalues[k];
            if ld.eigenvalues[k] > lo.eigenvalues[k] + slack
                || lo.eigenvalues[k] > lb.eigenvalues[k] + slack
            {
                ok = false;
                detail = format!(
                    "trial {trial}, k = {}: bracket {} <= {} <= {} broken",
                    k + 1,
                    ld.eigenvalues[k],
                    lo.eigenvalues[k],
                    lb.eigenvalues[k]
                );
            }
        }
    }
    if detail.is_empty() {
        detail = "box <= body <= inscribed-ball bracket held on 10 bodies, k <= 3".into();
    }
    check("spectral.domain_bracket", Suite::Spectral, ok, detail)
}

/// Observed convergence order of lambda_1 on the unit square is >= 1.7 over
/// h in {0.08, 0.04, 0.02} (theory: 2).
pub fn mesh_convergence_order(_seed: u64) -> CheckResult {
    let exact = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    let lap = CoefficientField::laplacian();
    let sq = unit_square();
    let errors: Vec<f64> = [0.08, 0.04, 0.02]
        .iter()
        .map(|&h| {
            let l = eigenvalues(&sq, &lap, 1, h).expect("square eigensolve").eigenvalues[0];
            (l - exact).abs()
        })
        .collect();
    let order1 = (errors[0] / errors[1]).log2();
    let order2 = (errors[1] / errors[2]).log2();
    let order = 0.5 * (order1 + order2);
    check(
        "spectral.mesh_convergence_order",
        Suite::Spectral,
        order >= 1.7 && errors[2] < errors[0],
        format!("errors {errors:?}, observed orders ({order1:.2}, {order2:.2})"),
    )
}

/// Torsion problem on the unit disk: max u, integral of u, and the energy
/// identity integral |Du|^2 = integral u.
pub fn torsion_disk_oracle(_seed: u64) -> CheckResult {
    let f = parse_expr("1").unwrap();
    let sol = solve_source(&disk(256, 1.0, 0.0, 0.0), &CoefficientField::laplacian(), &f, 0.02)
        .expect("disk source solve");
    let max_u = sol.max_abs();
    let int_u = integral_functional(&sol, &parse_expr("u").unwrap()).unwrap();
    let energy = integral_functional(&sol, &parse_expr("ux*ux+uy*uy").unwrap()).unwrap();
    let pi8 = std::f64::consts::PI / 8.0;
    let e_max = (max_u - 0.25_f64).abs() / 0.25;
    let e_int = (int_u - pi8).abs() / pi8;
    let e_energy = (energy - int_u).abs() / int_u;
    check(
        "spectral.torsion_disk_oracle",
        Suite::Spectral,
        e_max < 0.01 && e_int < 0.01 && e_energy < 0.015,
        format!(
            "max u = {max_u} (err {e_max:.3e}), int u = {int_u} (err {e_int:.3e}), energy gap {e_energy:.3e}"
        ),
    )
}
