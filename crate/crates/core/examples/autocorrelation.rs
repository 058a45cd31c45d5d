//! Exact autocorrelation coefficients against a finite patch, and the
//! homometry of the two reconstructed windows seen through their patches.
//!
//! cargo run --release --example autocorrelation -- [radius]
use aperimet::autocorr::{empirical_autocorrelation, eta_support, homometric, max_deviation};
use aperimet::cutproject::{generate_patch, patch_difference, WindowPlacement};
use aperimet::homometry::reconstruct_octagonal_pair;

fn main() -> aperimet::Result<()> {
    let r: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30.0);
    let pair = reconstruct_octagonal_pair()?;
    let w1 = WindowPlacement::new(pair.report.left.clone());
    let w2 = WindowPlacement::new(pair.report.right.clone());
    println!("windows homometric: {}", homometric(&w1, &w2));

    let top: Vec<_> = eta_support(&w1, 3.0)?.into_iter().take(10).collect();
    let p1 = generate_patch(&w1, r)?;
    let p2 = generate_patch(&w2, r)?;
    let e1 = empirical_autocorrelation(&p1, 3.0)?;
    let e2 = empirical_autocorrelation(&p2, 3.0)?;
    println!("{:<24} {:>22} {:>10} {:>10}", "difference", "eta", "patch 1", "patch 2");
    for c in &top {
        println!(
            "{:<24} {:>22} {:>10.4} {:>10.4}",
            c.location.to_string(),
            c.eta.to_string(),
            e1.weight(c.location),
            e2.weight(c.location)
        );
    }
    println!("max |empirical - eta| over these: {:.4}", max_deviation(&e1, &top));
    println!(
        "points only in patch 1: {}, only in patch 2: {}",
        patch_difference(&p1, &p2)?.len(),
        patch_difference(&p2, &p1)?.len()
    );
    Ok(())
}
