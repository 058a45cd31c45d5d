//! Exhaustive search for homometric, non-congruent polyominoes in a box.
//!
//! cargo run --release --example search_pairs -- [cells] [width] [height]
use aperimet::homometry::{is_minkowski_decomposable, search_polyomino_pairs};

fn main() -> aperimet::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: i64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let n = arg(0, 9) as usize;
    let w = arg(1, n as i64);
    let h = arg(2, w);
    let reports = search_polyomino_pairs(n, w, h)?;
    println!("{} homometric pairs of {n}-ominoes in a {w}x{h} box", reports.len());
    for r in reports.iter().take(5) {
        let sizes = [3, n / 3];
        println!(
            "  {:?}\n  {:?}  (3-point Minkowski factor: {})",
            r.left.cells(),
            r.right.cells(),
            n % 3 == 0 && is_minkowski_decomposable(r.left.cells(), sizes)
        );
    }
    Ok(())
}
