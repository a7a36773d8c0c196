//! Scratch probe for the resistance descent at acceptance settings.

use shapeopt::functionals::resistance_profile;
use shapeopt::optimizer::newton_optimize_profile;

fn main() {
    let start = std::time::Instant::now();
    let p = newton_optimize_profile(1.0, 1.0, 200, 20000, 1).unwrap();
    let r = resistance_profile(&p).unwrap();
    println!("resistance = {r}  (pi/2 = {})  in {:?}", std::f64::consts::FRAC_PI_2, start.elapsed());

    // two-parameter flat-top + truncated-cone family oracle
    let mut best = f64::INFINITY;
    let mut best_rs = 0.0;
    let mut best_b = 0.0;
    for i in 0..=400 {
        let rstar = i as f64 / 400.0;
        for jj in 0..=100 {
            let b = jj as f64 / 100.0; // rim height
            let m = 1.0 - b;
            if m <= 0.0 {
                continue;
            }
            let s = m / (1.0 - rstar).max(1e-12);
            let v = std::f64::consts::PI
                * (rstar * rstar + (1.0 - rstar * rstar) / (1.0 + s * s));
            if v < best {
                best = v;
                best_rs = rstar;
                best_b = b;
            }
        }
    }
    println!("family best {best} at r* = {best_rs}, rim height {best_b}");
    println!("ours <= family? {} ({r} vs {best})", r <= best);

    // flat top extent and slopes
    let u0 = p.heights[0];
    println!("u(0) = {u0}");
    let mut flat_end = 0usize;
    for (i, &u) in p.heights.iter().enumerate() {
        if (u0 - u) <= 1e-6 {
            flat_end = i;
        } else {
            break;
        }
    }
    let dr = p.dr();
    println!("flat top radius = {}", flat_end as f64 * dr);
    let slopes = p.slopes();
    let outside: Vec<f64> = slopes[flat_end..].to_vec();
    let max_bad = outside
        .iter()
        .filter(|s| s.abs() > 0.01)
        .map(|s| s.abs())
        .fold(f64::INFINITY, f64::min);
    println!("min |s| among sloped cells = {max_bad}");
    let count_small = outside.iter().filter(|s| s.abs() > 0.01 && s.abs() < 0.95).count();
    println!("sloped cells with |s| < 0.95: {count_small}");
    println!("first slopes after flat top: {:?}", &slopes[flat_end..(flat_end + 6).min(slopes.len())]);
    println!("last slopes: {:?}", &slopes[slopes.len() - 4..]);
}
