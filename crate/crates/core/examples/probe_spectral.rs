//! Scratch probe for discretization accuracy at the resolutions the test
//! suite pins down. Run: cargo run --release -p shapeopt --example probe_spectral

use shapeopt::expr::CoefficientField;
use shapeopt::fem::eigenvalues;
use shapeopt::geometry::{ConvexPolygon, Point};

fn unit_square() -> ConvexPolygon {
    ConvexPolygon::from_points(&[
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])
    .unwrap()
}

fn disk(n: usize, r: f64) -> ConvexPolygon {
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect();
    ConvexPolygon::from_points(&pts).unwrap()
}

fn main() {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let lap = CoefficientField::laplacian();
    let sq = unit_square();

    let mut errs = Vec::new();
    for h in [0.08, 0.04, 0.02] {
        let start = std::time::Instant::now();
        let s = eigenvalues(&sq, &lap, 3, h).unwrap();
        let exact = [2.0 * pi2, 5.0 * pi2, 5.0 * pi2];
        let rel: Vec<f64> = s
            .eigenvalues
            .iter()
            .zip(exact)
            .map(|(l, e)| (l - e) / e)
            .collect();
        println!(
            "square h={h}: dof={} lambda={:?} rel_err={:?} ({:?})",
            s.dof,
            s.eigenvalues,
            rel,
            start.elapsed()
        );
        errs.push(rel[0].abs());
    }
    let order1 = (errs[0] / errs[1]).log2();
    let order2 = (errs[1] / errs[2]).log2();
    println!("observed orders: {order1:.3} {order2:.3}");

    let d = disk(256, 1.0);
    let j01 = 2.404825557695773_f64;
    for h in [0.05, 0.02] {
        let start = std::time::Instant::now();
        let s = eigenvalues(&d, &lap, 1, h).unwrap();
        println!(
            "disk h={h}: dof={} lambda1={} rel_err={:.5e} ({:?})",
            s.dof,
            s.eigenvalues[0],
            (s.eigenvalues[0] - j01 * j01) / (j01 * j01),
            start.elapsed()
        );
    }

    // scaling: lambda1(2*Omega) vs lambda1(Omega)/4 at the same h
    let sq2 = shapeopt::geometry::scale_about(&sq, Point::new(0.0, 0.0), 2.0).unwrap();
    let a = eigenvalues(&sq, &lap, 1, 0.05).unwrap().eigenvalues[0];
    let b = eigenvalues(&sq2, &lap, 1, 0.05).unwrap().eigenvalues[0];
    println!("homogeneity: l(2S)*4/l(S) = {}", b * 4.0 / a);
}
