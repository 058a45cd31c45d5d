//! Bragg peaks of the reconstructed windows: identical lists for the two
//! homometric windows, agreement with the closed-form intensity, inversion
//! symmetry without mirror symmetry.
//!
//! cargo run --release --example diffraction -- [kmax] [imin]
use aperimet::cutproject::WindowPlacement;
use aperimet::diffraction::{closed_form_intensity, mirror_discrepancy, peak_list, Mirror};
use aperimet::homometry::reconstruct_octagonal_pair;
use aperimet::io;
use aperimet::quad::{star_on_half_module, surd_pair_f64};

fn main() -> aperimet::Result<()> {
    let mut args = std::env::args().skip(1);
    let kmax: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3.0);
    let imin: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1e-3);
    let pair = reconstruct_octagonal_pair()?;
    let w1 = WindowPlacement::new(pair.report.left.clone());
    let w2 = WindowPlacement::new(pair.report.right.clone());
    let a = peak_list(&w1, kmax, imin)?;
    let b = peak_list(&w2, kmax, imin)?;
    println!("{} peaks, internal cutoff R* = {:.3}", a.peaks.len(), a.internal_radius);

    let worst = a
        .peaks
        .iter()
        .zip(&b.peaks)
        .map(|(p, q)| {
            assert_eq!(p.module_vector, q.module_vector);
            (p.intensity - q.intensity).abs()
        })
        .fold(0.0, f64::max);
    println!("largest intensity difference between the two windows: {worst:e}");

    for p in a.peaks.iter().take(6) {
        let ks = surd_pair_f64(star_on_half_module(p.module_vector));
        println!(
            "  k = ({:+.4}, {:+.4})  I = {:.6}  closed form {:.6}",
            p.position[0],
            p.position[1],
            p.intensity,
            closed_form_intensity(ks[0], ks[1])
        );
    }
    for m in Mirror::ALL {
        println!("mirror {m:?}: largest discrepancy {:.4}", mirror_discrepancy(&w1, &a, m));
    }
    std::fs::create_dir_all("out/diffraction").ok();
    io::save("out/diffraction/peaks.csv".as_ref(), &io::peaks_csv(&a))?;
    io::save("out/diffraction/peaks.svg".as_ref(), &io::peaks_svg(&a))?;
    Ok(())
}
