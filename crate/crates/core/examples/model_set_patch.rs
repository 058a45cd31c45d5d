//! Generate a patch of the model set for the reconstructed 15-cell window
//! and compare its density with vol(W)/4.
//!
//! cargo run --release --example model_set_patch -- [radius]
use aperimet::cutproject::{density_estimate, generate_patch, genericity_check, WindowPlacement};
use aperimet::homometry::reconstruct_octagonal_pair;
use aperimet::io;

fn main() -> aperimet::Result<()> {
    let r: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30.0);
    let pair = reconstruct_octagonal_pair()?;
    let w = WindowPlacement::new(pair.report.left.clone());
    println!("generic up to |n_i| <= 6: {}", genericity_check(&w, 6)?);

    let patch = generate_patch(&w, r)?;
    println!("radius {r}: {} points", patch.len());
    println!("density {:.5} (limit {})", density_estimate(&patch), w.area() as f64 / 4.0);
    if let Some(d) = patch.min_distance() {
        println!("smallest distance {d:.6}");
    }
    for q in patch.points.iter().take(5) {
        let x = q.position();
        println!("  {}  ->  ({:.4}, {:.4})", q.n, x[0], x[1]);
    }
    std::fs::create_dir_all("out/patch").ok();
    io::save("out/patch/patch.csv".as_ref(), &io::patch_csv(&patch))?;
    io::save("out/patch/patch.svg".as_ref(), &io::patch_svg(&patch))?;
    Ok(())
}
