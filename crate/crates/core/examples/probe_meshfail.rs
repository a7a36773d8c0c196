//! Reproduce the homogeneity-check mesh failure and dump diagnostics.

use rand::Rng;
use shapeopt::fem::triangulate;
use shapeopt::geometry::{inradius_center, sampling, scale_about, ConvexPolygon, Point, Rect};

fn main() {
    let arena = Rect::new(Point::new(0.25, 0.25), Point::new(3.75, 3.75)).unwrap();
    let mut rng = sampling::rng_from_seed(7 ^ 0x40);
    for trial in 0..50 {
        let poly = loop {
            let p = sampling::random_convex_polygon(&mut rng, &arena, 10);
            let (_, rho) = inradius_center(&p);
            if rho > 0.18 * p.diameter() {
                break p;
            }
        };
        let (c, _) = inradius_center(&poly);
        let doubled = scale_about(&poly, c, 2.0).unwrap();
        let h = poly.diameter() / 32.0;
        for (tag, p) in [("base", &poly), ("doubled", &doubled)] {
            match triangulate(p, h) {
                Ok(_) => {}
                Err(e) => {
                    println!("trial {trial} {tag}: {e}");
                    println!("vertices ({}):", p.len());
                    for v in p.vertices() {
                        println!("  {:.17} {:.17}", v.x, v.y);
                    }
                    // turn angles
                    let vs = p.vertices();
                    let n = vs.len();
                    for i in 0..n {
                        let a = vs[i];
                        let b = vs[(i + 1) % n];
                        let cc = vs[(i + 2) % n];
                        let e1 = b - a;
                        let e2 = cc - b;
                        let turn = e1.cross(e2).atan2(e1.dot(e2));
                        println!("  turn at {}: {:.6e} rad", (i + 1) % n, turn);
                    }
                    println!("h = {h}");
                    return;
                }
            }
        }
        let _ = rng.gen_range(0.55..0.9); // keep rng stream aligned-ish
    }
    println!("no failure reproduced");
}
