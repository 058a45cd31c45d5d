//! Autocorrelation of model sets: the exact coefficients
//! `η(x) = dens(𝓛) · vol(W ∩ (W - x*))` and their finite-patch estimates.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::cutproject::{axis_pairs, combine_axis_pairs, ModelSetPatch, WindowPlacement};
use crate::error::{Error, Result};
use crate::quad::{direct_image, norm_f64, star_image, LatticeVector, Rational, SchemeConstants, Surd};
use crate::window::{covariogram_equal, difference_body};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AutocorrCoefficient {
    pub location: LatticeVector,
    pub eta: Surd,
    pub approx: f64,
}

fn lattice_density() -> Surd {
    let d = SchemeConstants::octagonal().lattice_density;
    Surd::rational(Rational::new(*d.numer() as i128, *d.denom() as i128))
}

/// `η(x)`, exact in `ℚ(√2)`.
pub fn eta(w: &WindowPlacement, x: LatticeVector) -> AutocorrCoefficient {
    let g = w
        .polyomino()
        .autocorrelation()
        .eval(star_image(x).map(Into::into));
    let eta = lattice_density() * g;
    AutocorrCoefficient {
        location: x,
        eta,
        approx: eta.to_f64(),
    }
}

/// Every `x ∈ L` with `|x| ≤ max_shift` and `η(x) > 0`, largest `η` first
/// (ties broken by lattice coefficients).
pub fn eta_support(w: &WindowPlacement, max_shift: f64) -> Result<Vec<AutocorrCoefficient>> {
    if !(max_shift >= 0.0 && max_shift.is_finite()) {
        return Err(Error::InvalidParameter(format!("invalid shift bound {max_shift}")));
    }
    let ac = w.polyomino().autocorrelation();
    let (lo, hi) = difference_body(w.polyomino()).bounding_box();
    let density = lattice_density();
    let xs = axis_pairs(max_shift, lo[0] as f64, hi[0] as f64);
    let ys = axis_pairs(max_shift, lo[1] as f64, hi[1] as f64);
    let mut out: Vec<AutocorrCoefficient> = combine_axis_pairs(&xs, &ys, |n| {
        if norm_f64(direct_image(n)) > max_shift {
            return None;
        }
        let eta = density * ac.eval(star_image(n).map(Into::into));
        (eta.signum() > 0).then(|| AutocorrCoefficient {
            location: n,
            eta,
            approx: eta.to_f64(),
        })
    });
    out.sort_by(|a, b| b.eta.cmp(&a.eta).then(a.location.cmp(&b.location)));
    Ok(out)
}

/// Pair-difference counts of a patch, restricted to differences with
/// `|x - y| ≤ max_shift`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalAutocorrelation {
    pub radius: f64,
    pub max_shift: f64,
    pub counts: BTreeMap<LatticeVector, u64>,
}

impl EmpiricalAutocorrelation {
    fn volume(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn weight(&self, d: LatticeVector) -> f64 {
        self.counts.get(&d).copied().unwrap_or(0) as f64 / self.volume()
    }

    pub fn weights(&self) -> impl Iterator<Item = (LatticeVector, f64)> + '_ {
        let v = self.volume();
        self.counts.iter().map(move |(d, c)| (*d, *c as f64 / v))
    }

    /// The `k` differences with the largest weight, ties broken by lattice
    /// coefficients.
    pub fn top(&self, k: usize) -> Vec<(LatticeVector, f64)> {
        let mut all: Vec<(LatticeVector, u64)> = self.counts.iter().map(|(d, c)| (*d, *c)).collect();
        all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let v = self.volume();
        all.into_iter().take(k).map(|(d, c)| (d, c as f64 / v)).collect()
    }
}

pub fn empirical_autocorrelation(p: &ModelSetPatch, max_shift: f64) -> Result<EmpiricalAutocorrelation> {
    if !(max_shift >= 0.0) {
        return Err(Error::InvalidParameter(format!("invalid shift bound {max_shift}")));
    }
    let mut pts: Vec<([f64; 2], LatticeVector)> =
        p.points.iter().map(|q| (q.position(), q.n)).collect();
    pts.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.1.cmp(&b.1)));
    let reach = max_shift + 1e-9;
    let counts = pts
        .par_iter()
        .enumerate()
        .fold(HashMap::new, |mut acc: HashMap<LatticeVector, u64>, (i, &(xi, ni))| {
            let start = pts[..i].partition_point(|q| q.0[0] < xi[0] - reach);
            for &(xj, nj) in &pts[start..] {
                if xj[0] > xi[0] + reach {
                    break;
                }
                let d = ni - nj;
                if norm_f64(direct_image(d)) <= max_shift {
                    *acc.entry(d).or_insert(0) += 1;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(EmpiricalAutocorrelation {
        radius: p.radius,
        max_shift,
        counts: counts.into_iter().collect(),
    })
}

/// Equal window covariograms, equivalently equal autocorrelations of the
/// model sets built from the two windows.
pub fn homometric(a: &WindowPlacement, b: &WindowPlacement) -> bool {
    covariogram_equal(a.polyomino(), b.polyomino())
}

/// `max |weight(d) - η(d)|` over the given coefficients.
pub fn max_deviation(emp: &EmpiricalAutocorrelation, coeffs: &[AutocorrCoefficient]) -> f64 {
    coeffs
        .iter()
        .map(|c| (emp.weight(c.location) - c.approx).abs())
        .fold(0.0, f64::max)
}
