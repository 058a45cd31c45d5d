//! Covariogram of a window: discrete autocorrelation, exact values,
//! difference body and an SVG heat map.
//!
//! cargo run --example covariogram -- [window.win] [out-dir]
use std::path::PathBuf;

use aperimet::io;
use aperimet::quad::Surd;
use aperimet::window::{covariogram_eval, covariogram_grid, difference_body, Polyomino};
use num_rational::Ratio;

fn main() -> aperimet::Result<()> {
    let mut args = std::env::args().skip(1);
    let p = match args.next() {
        Some(path) => io::read_polyomino(path.as_ref())?,
        // An L-tromino.
        None => Polyomino::new([[0, 0], [1, 0], [0, 1]], true)?,
    };
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/covariogram".into()));
    std::fs::create_dir_all(&out).map_err(|e| aperimet::Error::InvalidParameter(e.to_string()))?;

    println!("cells: {:?}", p.cells());
    for (d, n) in p.autocorrelation().iter() {
        println!("  N({:>2},{:>2}) = {n}", d[0], d[1]);
    }
    let half = Surd::rational(aperimet::quad::Rational::new(1, 2));
    let g = covariogram_eval(&p, [half, Surd::zero()]);
    println!("g(1/2, 0) = {} ≈ {:.6}", g.exact, g.approx);

    let grid = covariogram_grid(&p, Ratio::new(1, 4))?;
    let body = difference_body(&p);
    io::save(&out.join("grid.csv"), &io::grid_csv(&grid))?;
    io::save(&out.join("covariogram.svg"), &io::covariogram_svg(&grid, &body))?;
    println!(
        "{}x{} grid and heat map written to {}",
        grid.shape[0],
        grid.shape[1],
        out.display()
    );
    Ok(())
}
