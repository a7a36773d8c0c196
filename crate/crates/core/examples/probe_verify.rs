//! Scratch probe: run every verification check with timing.

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let total = std::time::Instant::now();
    for (id, _, f) in shapeopt::verify::registry() {
        let t = std::time::Instant::now();
        let r = f(seed);
        println!(
            "{} {} [{:?}] {}",
            if r.passed { "PASS" } else { "FAIL" },
            id,
            t.elapsed(),
            r.detail
        );
    }
    println!("total {:?}", total.elapsed());
}
