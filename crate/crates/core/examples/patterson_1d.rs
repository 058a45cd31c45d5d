//! Homometric integer sets on a line: equal difference multisets, not
//! mirror images.
//!
//! cargo run --release --example patterson_1d -- [max-points] [max-coord]
use aperimet::homometry::{difference_multiset_1d, smallest_1d_pairs};

fn main() -> aperimet::Result<()> {
    let mut args = std::env::args().skip(1);
    let max_points: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let max_coord: i64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    match smallest_1d_pairs(max_points, max_coord)? {
        None => println!("no homometric sets up to {max_points} points and span {max_coord}"),
        Some((n, m, pairs)) => {
            println!("smallest case: {n} points spanning 0..={m}, {} pairs", pairs.len());
            for (a, b) in &pairs {
                println!("  {a:?} ~ {b:?}");
            }
            let (a, _) = &pairs[0];
            let positive: Vec<i64> = difference_multiset_1d(a).into_iter().filter(|d| *d > 0).collect();
            println!("shared positive differences: {positive:?}");
        }
    }
    Ok(())
}
