//! Randomized invariants.

mod common;

use aperimet::autocorr::eta;
use aperimet::cutproject::WindowPlacement;
use aperimet::diffraction::intensity;
use aperimet::homometry::{difference_multiset_1d, minkowski_polyomino, PointConfiguration};
use aperimet::io::{parse_window_str, write_window};
use aperimet::quad::{
    direct_image, solve_coefficients, star_by_conjugation, star_image, LatticeVector, QuadInt,
    SchemeConstants, SQRT_2,
};
use aperimet::window::{covariogram_equal, covariogram_eval_rational, difference_body, Polyomino};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn polyomino_strategy(max: usize) -> impl Strategy<Value = Vec<[i64; 2]>> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| {
        common::random_polyomino(&mut ChaCha8Rng::seed_from_u64(seed), n)
    })
}

fn lattice_strategy(r: i64) -> impl Strategy<Value = LatticeVector> {
    prop::array::uniform4(-r..=r).prop_map(LatticeVector)
}

fn poly(cells: &[[i64; 2]]) -> Polyomino {
    Polyomino::new(cells.iter().copied(), true).unwrap()
}

#[test]
fn quad_sign_matches_float_away_from_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for _ in 0..100_000 {
        let (p, q) = (rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(-1_000_000..=1_000_000));
        let f = p as f64 + q as f64 * SQRT_2;
        if f.abs() > 1e-6 {
            assert_eq!(QuadInt::new(p, q).signum(), f.signum() as i32, "{p} {q}");
            checked += 1;
        }
    }
    assert!(checked > 99_000);
    // Near-cancellation cases from the Pell convergents of √2.
    assert_eq!(QuadInt::new(-665857, 470832).signum(), -1);
    assert_eq!(QuadInt::new(665857, -470832).signum(), 1);
}

#[test]
fn lattice_determinant_is_exact() {
    let (a, b) = common::z2_det(&common::sqrt2_basis());
    assert_eq!((a.abs(), b), (16, 0));
    let c = SchemeConstants::octagonal();
    assert_eq!(c.lattice_density, Ratio::new(1, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn star_map_agrees_with_conjugation(n in lattice_strategy(1000)) {
        prop_assert_eq!(star_image(n), star_by_conjugation(n));
        let (x, xs) = common::embed_f64(n.0);
        let d = direct_image(n).map(|q| q.to_f64());
        let s = star_image(n).map(|q| q.to_f64());
        for i in 0..2 {
            prop_assert!((d[i] - x[i]).abs() < 1e-9);
            prop_assert!((s[i] - xs[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn embedding_is_additive_and_invertible(n in lattice_strategy(10_000), m in lattice_strategy(10_000)) {
        let sum = n + m;
        let add = |a: [aperimet::quad::QuadHalf; 2], b: [aperimet::quad::QuadHalf; 2]| [a[0] + b[0], a[1] + b[1]];
        prop_assert_eq!(direct_image(sum), add(direct_image(n), direct_image(m)));
        prop_assert_eq!(star_image(sum), add(star_image(n), star_image(m)));
        prop_assert_eq!(solve_coefficients(direct_image(n), star_image(n)), Some(n));
    }

    #[test]
    fn covariogram_shape(cells in polyomino_strategy(8), a in -40i64..40, b in -40i64..40, den in 1i64..8) {
        let p = poly(&cells);
        let n = cells.len() as i64;
        let v = [Ratio::new(a, den), Ratio::new(b, den)];
        let g = covariogram_eval_rational(&p, v).as_rational().unwrap();
        let g_neg = covariogram_eval_rational(&p, [-v[0], -v[1]]).as_rational().unwrap();
        prop_assert_eq!(g, g_neg);
        let zero = covariogram_eval_rational(&p, [Ratio::from(0), Ratio::from(0)]).as_rational().unwrap();
        prop_assert_eq!(zero, (n as i128).into());
        prop_assert!(g >= 0.into() && g <= zero);
        let vf = [a as f64 / den as f64, b as f64 / den as f64];
        if g > 0.into() {
            prop_assert!(difference_body(&p).contains(vf));
        }
        if !difference_body(&p).contains(vf) {
            prop_assert_eq!(g, 0.into());
        }
    }

    #[test]
    fn covariogram_is_lipschitz(cells in polyomino_strategy(8), a in -30i64..30, b in -30i64..30, da in -3i64..=3, db in -3i64..=3) {
        let p = poly(&cells);
        let den = 8;
        let g = |x: i64, y: i64| covariogram_eval_rational(&p, [Ratio::new(x, den), Ratio::new(y, den)]).approx;
        let step = (da.abs() + db.abs()) as f64 / den as f64;
        let bound = 2.0 * cells.len() as f64 * step;
        prop_assert!((g(a, b) - g(a + da, b + db)).abs() <= bound + 1e-12);
    }

    #[test]
    fn covariogram_matches_raster(cells in polyomino_strategy(6), a in -20i64..20, b in -20i64..20) {
        let p = poly(&cells);
        let v = [a as f64 / 7.0, b as f64 / 7.0];
        let g = covariogram_eval_rational(&p, [Ratio::new(a, 7), Ratio::new(b, 7)]).approx;
        let raster = common::raster_overlap(&cells, v, 64);
        prop_assert!((g - raster).abs() <= 0.05 * cells.len() as f64, "{} vs {}", g, raster);
    }

    #[test]
    fn minkowski_sums_of_reflections_are_homometric(seed in any::<u64>(), nu in 1usize..5, nv in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = PointConfiguration::new(common::random_points(&mut rng, nu, 4)).unwrap();
        let v = PointConfiguration::new(common::random_points(&mut rng, nv, 4)).unwrap();
        let (Ok(a), Ok(b)) = (minkowski_polyomino(&u, &v), minkowski_polyomino(&u.negated(), &v)) else {
            return Ok(());
        };
        prop_assert!(covariogram_equal(&a, &b));
    }

    #[test]
    fn fingerprints_decide_covariogram_equality(x in polyomino_strategy(6), y in polyomino_strategy(6)) {
        let (p, q) = (poly(&x), poly(&y));
        let oracle = common::difference_counts(&x) == common::difference_counts(&y);
        prop_assert_eq!(covariogram_equal(&p, &q), oracle);
        // The counts come back out of the covariogram at integer offsets.
        for (d, count) in common::difference_counts(&x) {
            let g = covariogram_eval_rational(&p, [d[0].into(), d[1].into()]).as_rational().unwrap();
            prop_assert_eq!(g, (count as i128).into());
        }
        prop_assert!(covariogram_equal(&p, &p.negated()));
        prop_assert!(covariogram_equal(&p, &p.translated([3, -2])));
    }

    #[test]
    fn eta_is_symmetric_and_bounded(cells in polyomino_strategy(8), n in lattice_strategy(6)) {
        let w = WindowPlacement::new(poly(&cells));
        let e = eta(&w, n);
        prop_assert_eq!(e.eta, eta(&w, -n).eta);
        prop_assert!(e.approx >= 0.0 && e.approx <= 0.25 * cells.len() as f64 + 1e-12);
        let s = star_image(n).map(|q| q.to_f64());
        prop_assert_eq!(e.approx > 0.0, difference_body(w.polyomino()).contains(s));
    }

    #[test]
    fn intensity_is_even(cells in polyomino_strategy(8), n in lattice_strategy(5)) {
        let w = WindowPlacement::new(poly(&cells));
        let i = intensity(&w, n);
        prop_assert!((i - intensity(&w, -n)).abs() <= 1e-12 * (1.0 + i));
        prop_assert!(i >= 0.0);
        prop_assert!(i <= (0.25 * cells.len() as f64).powi(2) + 1e-12);
    }

    #[test]
    fn difference_multisets(set in prop::collection::btree_set(0i64..40, 1..8)) {
        let s: Vec<i64> = set.into_iter().collect();
        let d = difference_multiset_1d(&s);
        prop_assert_eq!(d.len(), s.len() * s.len());
        prop_assert_eq!(d.iter().filter(|&&x| x == 0).count(), s.len());
        prop_assert_eq!(*d.last().unwrap(), s[s.len() - 1] - s[0]);
        let mut neg: Vec<i64> = d.iter().map(|x| -x).collect();
        neg.sort_unstable();
        prop_assert_eq!(&neg, &d);
        let shifted: Vec<i64> = s.iter().map(|x| x + 5).collect();
        prop_assert_eq!(difference_multiset_1d(&shifted), d);
    }

    #[test]
    fn window_files_round_trip(cells in polyomino_strategy(10), p in -9i64..9, q in 1i64..9, connected in any::<bool>()) {
        let w = Polyomino::new(cells.iter().copied(), connected).unwrap()
            .with_anchor([Ratio::new(p, q), Ratio::new(q, p.abs() + 1)]);
        let text = write_window(&w);
        prop_assert_eq!(parse_window_str(&text).unwrap(), w);
    }
}
