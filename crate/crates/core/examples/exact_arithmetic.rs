//! Exact coordinates in the octagonal scheme: direct and internal images of
//! lattice vectors, the star map as √2 ↦ −√2, and exact signs.
use aperimet::quad::{
    direct_image, solve_coefficients, star_by_conjugation, star_image, LatticeVector, QuadInt,
    SchemeConstants,
};

fn main() {
    let scheme = SchemeConstants::octagonal();
    println!("|det B| = {}", scheme.determinant().abs());
    println!("lattice density = {}", scheme.lattice_density);

    for i in 0..4 {
        let e = LatticeVector::unit(i);
        let x = direct_image(e);
        let s = star_image(e);
        assert_eq!(s, star_by_conjugation(e));
        assert_eq!(solve_coefficients(x, s), Some(e));
        println!("e{} -> x = ({}, {}), x* = ({}, {})", i + 1, x[0], x[1], s[0], s[1]);
    }

    // 99 - 70√2 ≈ 0.0051 is positive, though the float of each term is ~99.
    let tiny = QuadInt::new(99, -70);
    println!("sign(99 - 70√2) = {} (≈ {:e})", tiny.signum(), tiny.to_f64());
}
