//! Rebuild the homometric 15-cell windows from the closed-form intensity
//! and write them as a pair report.
//!
//! cargo run --release --example reconstruct_pair -- [out-dir]
use std::path::PathBuf;

use aperimet::homometry::{printed_factors, reconstruct_octagonal_pair};
use aperimet::io;

fn main() -> aperimet::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/pair".into()));
    for (i, f) in printed_factors().iter().enumerate() {
        let counts = f.to_difference_counts().expect("factor is a difference spectrum");
        println!("factor {}: {} difference offsets", i + 1, counts.counts().len());
    }
    let pair = reconstruct_octagonal_pair()?;
    println!("u = {:?}", pair.u.points());
    println!("v = {:?}", pair.v.points());
    let r = &pair.report;
    println!("left  = {:?}", r.left.cells());
    println!("right = {:?}", r.right.cells());
    println!("congruent: {}, shared cells: {}", r.congruent, pair.shared_cells);
    for c in &pair.closed_form {
        println!("closed form: {:?} placement, max relative error {:e}", c.placement, c.max_rel_error);
    }
    std::fs::create_dir_all(&out).ok();
    io::write_pair_report(&out, r)?;
    io::save(&out.join("left.svg"), &io::window_svg(&r.left))?;
    io::save(&out.join("right.svg"), &io::window_svg(&r.right))?;
    println!("report written to {}", out.display());
    Ok(())
}
