//! Pure point diffraction of the model sets.
//!
//! Bragg peaks sit on the Fourier module `½L`; the peak at `k` has intensity
//! `I(k) = dens(𝓛)² · |1̂_W(k*)|²`. A module point is stored by the lattice
//! vector `n` with `k = direct_image(n)/2`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cutproject::{axis_pairs, combine_axis_pairs, WindowPlacement};
use crate::error::{Error, Result};
use crate::quad::{
    direct_image, half_module_position, norm_sq_exact, solve_coefficients, star_image,
    star_on_half_module, surd_pair_f64, LatticeVector, SchemeConstants, Surd, Vec2,
};
use crate::window::{sinc, window_fourier_transform, Polyomino};

/// Tolerance for the closed-form comparison.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-9;
pub const CLOSED_FORM_SAMPLES: usize = 1000;
const CLOSED_FORM_SEED: u64 = 0x5eed_c0de;

fn lattice_density_sq() -> f64 {
    let d = SchemeConstants::octagonal().lattice_density;
    let d = d.to_f64().expect("small rational");
    d * d
}

/// `dens(𝓛)² · |1̂_P(k)|²` for an internal-space frequency `k`.
pub fn intensity_at_internal(p: &Polyomino, k_star: [f64; 2]) -> f64 {
    lattice_density_sq() * window_fourier_transform(p, k_star).norm_sqr()
}

/// Intensity of the Bragg peak at the module point represented by `n`.
pub fn intensity(w: &WindowPlacement, n: LatticeVector) -> f64 {
    intensity_at_internal(w.polyomino(), surd_pair_f64(star_on_half_module(n)))
}

/// The two printed factors of `f(κ, λ)`.
pub fn closed_form_factors(kappa: f64, lambda: f64) -> (f64, f64) {
    let c = |x: f64| (PI * x).cos();
    let first = 3.0 + 2.0 * c(2.0 * lambda) + 4.0 * c(lambda) * c(2.0 * kappa + 3.0 * lambda);
    let second = 5.0
        + 6.0 * c(2.0 * kappa)
        + 2.0 * c(4.0 * kappa)
        + 4.0 * (2.0 * c(kappa) + c(3.0 * kappa)) * c(3.0 * kappa + 6.0 * lambda);
    (first, second)
}

pub fn closed_form_f(kappa: f64, lambda: f64) -> f64 {
    let (a, b) = closed_form_factors(kappa, lambda);
    a * b
}

/// `f(κ,λ)/16 · (sin(πκ) sin(πλ) / (π²κλ))²`, continuous at `κλ = 0`.
pub fn closed_form_intensity(kappa: f64, lambda: f64) -> f64 {
    let s = sinc(kappa) * sinc(lambda);
    closed_form_f(kappa, lambda) / 16.0 * s * s
}

/// The four placements of a window tried against the closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Identity,
    MirrorX,
    MirrorY,
    Inversion,
}

impl Placement {
    pub const ALL: [Placement; 4] = [
        Placement::Identity,
        Placement::MirrorX,
        Placement::MirrorY,
        Placement::Inversion,
    ];

    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Placement::Identity => [[1, 0], [0, 1]],
            Placement::MirrorX => [[-1, 0], [0, 1]],
            Placement::MirrorY => [[1, 0], [0, -1]],
            Placement::Inversion => [[-1, 0], [0, -1]],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormCheck {
    /// First placement (in [`Placement::ALL`] order) that meets the tolerance.
    pub placement: Placement,
    pub max_rel_error: f64,
    /// Max relative error for every placement, in [`Placement::ALL`] order.
    pub errors: [f64; 4],
}

fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Max relative error between `dens² |1̂_P/vol|²` and the closed form over
/// fixed pseudo-random samples in `[-3, 3]²`.
pub fn closed_form_error(p: &Polyomino) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(CLOSED_FORM_SEED);
    let area = p.area() as f64;
    let dens = area / 4.0;
    (0..CLOSED_FORM_SAMPLES)
        .map(|_| {
            let k = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let ft = window_fourier_transform(p, k) / area;
            let ours = dens * dens * ft.norm_sqr();
            relative_error(ours, closed_form_intensity(k[0], k[1]))
        })
        .fold(0.0, f64::max)
}

/// Find the placement of `p` reproducing the closed-form intensity.
pub fn verify_closed_form(p: &Polyomino) -> Result<ClosedFormCheck> {
    let errors = Placement::ALL.map(|pl| closed_form_error(&p.transformed(&pl.matrix())));
    let best = errors.iter().copied().fold(f64::INFINITY, f64::min);
    match Placement::ALL
        .iter()
        .zip(errors)
        .find(|(_, e)| *e <= CLOSED_FORM_TOLERANCE)
    {
        Some((&placement, max_rel_error)) => Ok(ClosedFormCheck {
            placement,
            max_rel_error,
            errors,
        }),
        None => Err(Error::NoPlacementMatches { best_error: best }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BraggPeak {
    pub module_vector: LatticeVector,
    pub position: [f64; 2],
    pub intensity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeakList {
    /// Sorted by exact `|k|`, then by lattice coefficients.
    pub peaks: Vec<BraggPeak>,
    pub k_max: f64,
    pub intensity_min: f64,
    /// Per-axis internal cutoff: no peak above threshold has `|κ|` or `|λ|`
    /// beyond it.
    pub axis_cutoff: f64,
    /// Internal radius `R*` enclosing the scanned internal square.
    pub internal_radius: f64,
}

impl PeakList {
    pub fn get(&self, n: LatticeVector) -> Option<&BraggPeak> {
        self.peaks.iter().find(|p| p.module_vector == n)
    }
}

/// Per-axis bound `|sinc(t)| ≤ min(1, 1/(π|t|))`.
fn sinc_envelope(t: f64) -> f64 {
    let a = PI * t.abs();
    if a <= 1.0 {
        1.0
    } else {
        1.0 / a
    }
}

/// `I ≥ i_min` forces `envelope(κ)·envelope(λ) ≥ τ` with
/// `τ = √i_min / (dens(𝓛) · #cells)`; each envelope is at most one, so each
/// internal coordinate is bounded by `1/(πτ)`.
fn decay_threshold(w: &WindowPlacement, intensity_min: f64) -> f64 {
    intensity_min.sqrt() / (lattice_density_sq().sqrt() * w.area() as f64)
}

pub fn axis_cutoff(w: &WindowPlacement, intensity_min: f64) -> f64 {
    let tau = decay_threshold(w, intensity_min);
    if tau > 1.0 {
        0.0
    } else {
        1.0 / (PI * tau)
    }
}

pub fn peak_list(w: &WindowPlacement, k_max: f64, intensity_min: f64) -> Result<PeakList> {
    if !(k_max > 0.0 && k_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("kmax must be positive, got {k_max}")));
    }
    if !(intensity_min > 0.0 && intensity_min.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "intensity threshold must be positive, got {intensity_min}"
        )));
    }
    let cutoff = axis_cutoff(w, intensity_min);
    let tau = decay_threshold(w, intensity_min);
    let peaks = scan_module(w, k_max, intensity_min, cutoff, Some(tau));
    Ok(PeakList {
        peaks,
        k_max,
        intensity_min,
        axis_cutoff: cutoff,
        internal_radius: cutoff * std::f64::consts::SQRT_2,
    })
}

/// Scan module points with `|k| ≤ k_max` and internal coordinates inside
/// `[-cutoff, cutoff]²`, keeping those with intensity at least `intensity_min`.
/// With `envelope_min` set, points whose decay bound already rules them out
/// are skipped before the transform is evaluated.
pub fn scan_module(
    w: &WindowPlacement,
    k_max: f64,
    intensity_min: f64,
    cutoff: f64,
    envelope_min: Option<f64>,
) -> Vec<BraggPeak> {
    // k = B·n / 2 along each axis: 2k = m + c/√2, 2k* = m - c/√2.
    let xs = axis_pairs(2.0 * k_max, -2.0 * cutoff, 2.0 * cutoff);
    let ys = axis_pairs(2.0 * k_max, -2.0 * cutoff, 2.0 * cutoff);
    let mut peaks: Vec<(Surd, BraggPeak)> = combine_axis_pairs(&xs, &ys, |n| {
        let pos = half_module_position(n);
        let posf = surd_pair_f64(pos);
        if posf[0].hypot(posf[1]) > k_max {
            return None;
        }
        let k_star = surd_pair_f64(star_on_half_module(n));
        if k_star[0].abs() > cutoff || k_star[1].abs() > cutoff {
            return None;
        }
        if let Some(tau) = envelope_min {
            if sinc_envelope(k_star[0]) * sinc_envelope(k_star[1]) < tau * (1.0 - 1e-12) {
                return None;
            }
        }
        let i = intensity_at_internal(w.polyomino(), k_star);
        (i >= intensity_min).then(|| {
            (
                norm_sq_exact(pos),
                BraggPeak {
                    module_vector: n,
                    position: posf,
                    intensity: i,
                },
            )
        })
    });
    peaks.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.module_vector.cmp(&b.1.module_vector))
    });
    peaks.into_iter().map(|(_, p)| p).collect()
}

/// A mirror line through the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mirror {
    /// `(x, y) ↦ (x, -y)`
    XAxis,
    /// `(x, y) ↦ (-x, y)`
    YAxis,
    /// `(x, y) ↦ (y, x)`
    Diagonal,
    /// `(x, y) ↦ (-y, -x)`
    AntiDiagonal,
}

impl Mirror {
    pub const ALL: [Mirror; 4] = [
        Mirror::XAxis,
        Mirror::YAxis,
        Mirror::Diagonal,
        Mirror::AntiDiagonal,
    ];

    pub fn apply(self, v: Vec2) -> Vec2 {
        let [x, y] = v;
        match self {
            Mirror::XAxis => [x, -y],
            Mirror::YAxis => [-x, y],
            Mirror::Diagonal => [y, x],
            Mirror::AntiDiagonal => [-y, -x],
        }
    }

    /// The lattice vector of the mirrored point. Coordinate-wise reflections
    /// commute with √2-conjugation, so the internal image mirrors the same way.
    pub fn reflect(self, n: LatticeVector) -> LatticeVector {
        solve_coefficients(self.apply(direct_image(n)), self.apply(star_image(n)))
            .expect("the octagonal module is mirror symmetric")
    }
}

/// Largest `|I(k) - I(m(k))|` over the listed peaks.
pub fn mirror_discrepancy(w: &WindowPlacement, peaks: &PeakList, mirror: Mirror) -> f64 {
    let index: HashMap<LatticeVector, f64> = peaks
        .peaks
        .iter()
        .map(|p| (p.module_vector, p.intensity))
        .collect();
    peaks
        .peaks
        .iter()
        .map(|p| {
            let image = mirror.reflect(p.module_vector);
            let other = index
                .get(&image)
                .copied()
                .unwrap_or_else(|| intensity(w, image));
            (p.intensity - other).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutproject::tests::window;

    #[test]
    fn closed_form_at_origin() {
        assert_eq!(closed_form_f(0.0, 0.0), 225.0);
        assert!((closed_form_intensity(0.0, 0.0) - 225.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_parity_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (k, l) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let a = closed_form_f(k, l);
            assert!((a - closed_form_f(-k, -l)).abs() <= 1e-12 * a.abs().max(1.0));
        }
        let n = 200;
        for i in 0..n {
            for j in 0..n {
                let k = -3.0 + 6.0 * i as f64 / (n - 1) as f64;
                let l = -3.0 + 6.0 * j as f64 / (n - 1) as f64;
                assert!(closed_form_intensity(k, l) >= -1e-12);
            }
        }
    }

    #[test]
    fn intensity_examples() {
        let single = window(&[[0, 0]]);
        assert!((intensity(&single, LatticeVector::ZERO) - 1.0 / 16.0).abs() < 1e-15);
        // k = e1/2 has k* = (1/2, 0).
        let expected = (0.25 * 2.0 / PI).powi(2);
        let got = intensity(&single, LatticeVector::unit(0));
        assert!((got - expected).abs() < 1e-15, "{got} vs {expected}");
        assert!((expected - 0.02533).abs() < 1e-5);
    }

    #[test]
    fn intensity_is_inversion_symmetric() {
        let w = window(&[[0, 0], [1, 0], [1, 1], [2, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = LatticeVector([(); 4].map(|_| rng.gen_range(-6..=6)));
            let a = intensity(&w, n);
            let b = intensity(&w, -n);
            assert!((a - b).abs() <= 1e-14 * a.max(1e-300));
        }
    }

    #[test]
    fn peak_list_basic_contract() {
        let w = window(&[[0, 0], [1, 0], [1, 1]]);
        let pl = peak_list(&w, 1.5, 1e-3).unwrap();
        assert_eq!(pl.peaks[0].module_vector, LatticeVector::ZERO);
        assert!((pl.peaks[0].intensity - 9.0 / 16.0).abs() < 1e-14);
        for p in &pl.peaks {
            assert!(p.intensity >= 1e-3);
            assert!(p.position[0].hypot(p.position[1]) <= 1.5);
            let q = pl.get(-p.module_vector).expect("inversion partner");
            assert!((q.intensity - p.intensity).abs() < 1e-14);
        }
        assert!(peak_list(&w, 0.0, 1e-3).is_err());
        assert!(peak_list(&w, 1.0, 0.0).is_err());
    }

    #[test]
    fn mirror_reflection_is_involution() {
        for m in Mirror::ALL {
            for i in 0..4 {
                let n = LatticeVector::unit(i);
                assert_eq!(m.reflect(m.reflect(n)), n);
            }
        }
    }
}
