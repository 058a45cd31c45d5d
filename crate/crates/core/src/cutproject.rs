//! Finite patches of the model set `⋏(W) = {x ∈ L : x* ∈ W}`.
//!
//! Window membership is decided exactly in internal space; only the radius
//! cutoff `|x| < r` in direct space uses floating point.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::{
    direct_image, norm_f64, star_image, LatticeVector, QuadHalf, QuadInt, Vec2, COORDINATE_LIMIT,
    SQRT_2,
};
use crate::window::{Cell, Polyomino};

const S: f64 = SQRT_2 / 2.0;
const SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Boundary,
}

/// A polyomino placed in internal space at its anchor.
#[derive(Clone, Debug)]
pub struct WindowPlacement {
    polyomino: Polyomino,
    cells: HashSet<Cell>,
    /// Anchor coordinates as `num / den` with `den > 0`.
    anchor_frac: [(i64, i64); 2],
    /// Closed float bounding box in internal space.
    bounds: [[f64; 2]; 2],
}

impl WindowPlacement {
    pub fn new(polyomino: Polyomino) -> Self {
        let anchor = polyomino.anchor();
        let anchor_frac = anchor.map(|a| (*a.numer(), *a.denom()));
        let af = anchor.map(|a| *a.numer() as f64 / *a.denom() as f64);
        let (lo, hi) = polyomino.bounding_box();
        let bounds = [
            [lo[0] as f64 + af[0], (hi[0] + 1) as f64 + af[0]],
            [lo[1] as f64 + af[1], (hi[1] + 1) as f64 + af[1]],
        ];
        WindowPlacement {
            cells: polyomino.cells().iter().copied().collect(),
            polyomino,
            anchor_frac,
            bounds,
        }
    }

    pub fn polyomino(&self) -> &Polyomino {
        &self.polyomino
    }

    pub fn area(&self) -> usize {
        self.polyomino.area()
    }

    /// Internal-space bounding box `[[x_lo, x_hi], [y_lo, y_hi]]`.
    pub fn bounds(&self) -> [[f64; 2]; 2] {
        self.bounds
    }

    /// Largest distance from the origin to a point of the window.
    pub fn circumradius(&self) -> f64 {
        let [bx, by] = self.bounds;
        let fx = bx[0].abs().max(bx[1].abs());
        let fy = by[0].abs().max(by[1].abs());
        fx.hypot(fy)
    }

    /// Cell indices along one axis whose closure contains the coordinate:
    /// one index in the interior of a column, two on a grid line.
    fn axis_cells(&self, axis: usize, c: QuadHalf) -> ([i64; 2], usize) {
        let (an, ad) = self.anchor_frac[axis];
        // c - an/ad = (c.p·ad - 2·an + c.q·ad·√2) / (2·ad)
        let num = QuadInt::new(c.p * ad - 2 * an, c.q * ad);
        let (k, exact) = num.div_floor(2 * ad);
        if exact {
            ([k - 1, k], 2)
        } else {
            ([k, k], 1)
        }
    }

    /// Exact location of an internal-space point relative to the window.
    pub fn locate(&self, star: Vec2) -> Membership {
        let (xs, nx) = self.axis_cells(0, star[0]);
        let (ys, ny) = self.axis_cells(1, star[1]);
        let mut inside = 0;
        for &x in &xs[..nx] {
            for &y in &ys[..ny] {
                if self.cells.contains(&[x, y]) {
                    inside += 1;
                }
            }
        }
        if inside == 0 {
            Membership::Outside
        } else if inside == nx * ny {
            Membership::Inside
        } else {
            Membership::Boundary
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PatchPoint {
    pub n: LatticeVector,
    pub x: Vec2,
    pub star: Vec2,
}

impl PatchPoint {
    pub fn new(n: LatticeVector) -> Self {
        PatchPoint {
            n,
            x: direct_image(n),
            star: star_image(n),
        }
    }

    pub fn position(&self) -> [f64; 2] {
        self.x.map(QuadHalf::to_f64)
    }
}

#[derive(Clone, Debug)]
pub struct ModelSetPatch {
    /// Sorted by lattice coefficients.
    pub points: Vec<PatchPoint>,
    pub radius: f64,
    pub window: WindowPlacement,
}

impl ModelSetPatch {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lattice_vectors(&self) -> BTreeSet<LatticeVector> {
        self.points.iter().map(|p| p.n).collect()
    }

    /// Smallest distance between two distinct points.
    pub fn min_distance(&self) -> Option<f64> {
        let mut pos: Vec<[f64; 2]> = self.points.iter().map(PatchPoint::position).collect();
        pos.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let mut best = f64::INFINITY;
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                if pos[j][0] - pos[i][0] >= best {
                    break;
                }
                best = best.min((pos[j][0] - pos[i][0]).hypot(pos[j][1] - pos[i][1]));
            }
        }
        best.is_finite().then_some(best)
    }
}

/// Integer pairs `(m, c)` with direct coordinate `m + c/√2` in `(-r, r)` and
/// internal coordinate `m - c/√2` in `[lo, hi]`, both up to float slack.
///
/// The two coordinates of `B·n` decouple: `(n1, n2 - n4)` fixes the x pair,
/// `(n3, n2 + n4)` the y pair.
pub(crate) fn axis_pairs(r: f64, lo: f64, hi: f64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let m_lo = ((lo - r) / 2.0).floor() as i64 - 1;
    let m_hi = ((hi + r) / 2.0).ceil() as i64 + 1;
    for m in m_lo..=m_hi {
        let mf = m as f64;
        let c_lo = ((-r - mf) / S).max((mf - hi) / S) - SLACK;
        let c_hi = ((r - mf) / S).min((mf - lo) / S) + SLACK;
        if c_lo > c_hi {
            continue;
        }
        for c in c_lo.ceil() as i64..=c_hi.floor() as i64 {
            out.push((m, c));
        }
    }
    out
}

/// Combine x and y axis pairs into lattice vectors, filtering each
/// combination through `keep`.
pub(crate) fn combine_axis_pairs<T, F>(xs: &[(i64, i64)], ys: &[(i64, i64)], keep: F) -> Vec<T>
where
    T: Send,
    F: Fn(LatticeVector) -> Option<T> + Sync,
{
    let by_parity: [Vec<(i64, i64)>; 2] = [0, 1].map(|par| {
        ys.iter()
            .copied()
            .filter(|&(_, b)| b.rem_euclid(2) == par)
            .collect()
    });
    xs.par_iter()
        .flat_map_iter(|&(n1, a)| {
            let keep = &keep;
            by_parity[a.rem_euclid(2) as usize]
                .iter()
                .filter_map(move |&(n3, b)| {
                    LatticeVector::from_axis_pairs(n1, a, n3, b).and_then(keep)
                })
        })
        .collect()
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    if r >= (COORDINATE_LIMIT / 4) as f64 {
        return Err(Error::InvalidParameter(format!("radius {r} too large")));
    }
    Ok(())
}

enum Candidate {
    Point(PatchPoint),
    Hit(LatticeVector),
}

/// All points of `⋏(W)` with `|x| < r`, sorted by lattice coefficients.
pub fn generate_patch(w: &WindowPlacement, r: f64) -> Result<ModelSetPatch> {
    check_radius(r)?;
    let [bx, by] = w.bounds();
    let xs = axis_pairs(r, bx[0], bx[1]);
    let ys = axis_pairs(r, by[0], by[1]);
    let found: Vec<Candidate> = combine_axis_pairs(&xs, &ys, |n| {
        let x = direct_image(n);
        if norm_f64(x) >= r {
            return None;
        }
        let star = star_image(n);
        match w.locate(star) {
            Membership::Inside => Some(Candidate::Point(PatchPoint { n, x, star })),
            Membership::Outside => None,
            Membership::Boundary => Some(Candidate::Hit(n)),
        }
    });
    let mut points = Vec::with_capacity(found.len());
    let mut hits = Vec::new();
    for c in found {
        match c {
            Candidate::Point(p) => points.push(p),
            Candidate::Hit(n) => hits.push(n),
        }
    }
    if let Some(&lattice) = hits.iter().min() {
        return Err(Error::BoundaryHit { lattice });
    }
    points.sort_unstable_by_key(|p| p.n);
    Ok(ModelSetPatch {
        points,
        radius: r,
        window: w.clone(),
    })
}

/// Exhaustive scan of `|n_i| ≤ bound` for star images on `∂W`.
pub fn genericity_check(w: &WindowPlacement, bound: i64) -> Result<bool> {
    if bound <= 0 {
        return Err(Error::InvalidParameter("bound must be positive".into()));
    }
    let hit = (-bound..=bound).into_par_iter().any(|n1| {
        for n2 in -bound..=bound {
            for n3 in -bound..=bound {
                for n4 in -bound..=bound {
                    // With both √2-parts nonzero neither internal coordinate is
                    // rational, so the point avoids every cell edge.
                    if n2 != n4 && n2 != -n4 {
                        continue;
                    }
                    let star = star_image(LatticeVector([n1, n2, n3, n4]));
                    if w.locate(star) == Membership::Boundary {
                        return true;
                    }
                }
            }
        }
        false
    });
    Ok(!hit)
}

/// Points of `a` that are not in `b`.
pub fn patch_difference(a: &ModelSetPatch, b: &ModelSetPatch) -> Result<Vec<PatchPoint>> {
    if a.radius != b.radius {
        return Err(Error::InvalidParameter(format!(
            "patch radii differ: {} vs {}",
            a.radius, b.radius
        )));
    }
    let other = b.lattice_vectors();
    Ok(a.points
        .iter()
        .copied()
        .filter(|p| !other.contains(&p.n))
        .collect())
}

/// `count / (π r²)`; tends to `vol(W)/4`.
pub fn density_estimate(p: &ModelSetPatch) -> f64 {
    p.len() as f64 / (PI * p.radius * p.radius)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_rational::Ratio;

    pub(crate) fn window(cells: &[Cell]) -> WindowPlacement {
        WindowPlacement::new(Polyomino::new(cells.iter().copied(), false).unwrap())
    }

    /// Literal scan of the coefficient box `|n_i| ≤ (r + R_int)/2`.
    pub(crate) fn box_scan(w: &WindowPlacement, r: f64) -> Vec<LatticeVector> {
        let bound = ((r + w.circumradius()) / 2.0).ceil() as i64;
        let mut out = Vec::new();
        for n1 in -bound..=bound {
            for n2 in -bound..=bound {
                for n3 in -bound..=bound {
                    for n4 in -bound..=bound {
                        let n = LatticeVector([n1, n2, n3, n4]);
                        if norm_f64(direct_image(n)) < r
                            && w.locate(star_image(n)) == Membership::Inside
                        {
                            out.push(n);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn separable_enumeration_matches_box_scan() {
        let w = window(&[[0, 0], [1, 0], [1, 1], [2, 1]]);
        for r in [0.5, 2.0, 4.5] {
            let patch = generate_patch(&w, r).unwrap();
            let got: Vec<LatticeVector> = patch.points.iter().map(|p| p.n).collect();
            assert_eq!(got, box_scan(&w, r), "r = {r}");
        }
    }

    #[test]
    fn tiny_patch_contains_origin() {
        let p = generate_patch(&window(&[[0, 0]]), 0.1).unwrap();
        assert_eq!(p.points.len(), 1);
        assert_eq!(p.points[0].n, LatticeVector::ZERO);
    }

    #[test]
    fn far_window_gives_empty_patch() {
        let poly = Polyomino::new([[0, 0]], false)
            .unwrap()
            .with_anchor([Ratio::new(1001, 2), Ratio::new(1001, 2)]);
        // Star images are dense, so only a tiny ball is reliably empty.
        let p = generate_patch(&WindowPlacement::new(poly), 0.05).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn boundary_membership_is_exact() {
        let w = window(&[[0, 0], [1, 0]]);
        let h = |p, q| QuadHalf::new(p, q);
        // Internal edge between the two cells at x = 1/2.
        assert_eq!(w.locate([h(1, 0), h(0, 0)]), Membership::Inside);
        // Outer edge at x = 3/2.
        assert_eq!(w.locate([h(3, 0), h(0, 0)]), Membership::Boundary);
        // Corner at (-1/2, -1/2).
        assert_eq!(w.locate([h(-1, 0), h(-1, 0)]), Membership::Boundary);
        assert_eq!(w.locate([h(0, 1), h(1, -1)]), Membership::Inside);
        assert_eq!(w.locate([h(4, 0), h(0, 0)]), Membership::Outside);
    }

    #[test]
    fn integer_anchor_raises_boundary_hit() {
        let poly = Polyomino::new([[0, 0]], false)
            .unwrap()
            .with_anchor([Ratio::from_integer(0), Ratio::from_integer(0)]);
        let w = WindowPlacement::new(poly);
        assert!(matches!(generate_patch(&w, 3.0), Err(Error::BoundaryHit { .. })));
        assert!(!genericity_check(&w, 3).unwrap());
    }

    #[test]
    fn genericity_examples() {
        assert!(genericity_check(&window(&[[0, 0], [1, 0], [1, 1]]), 6).unwrap());
        let far = Polyomino::new([[0, 0]], false)
            .unwrap()
            .with_anchor([Ratio::from_integer(500), Ratio::from_integer(500)]);
        assert!(genericity_check(&WindowPlacement::new(far), 5).unwrap());
        assert!(genericity_check(&window(&[[0, 0]]), 0).is_err());
    }

    #[test]
    fn difference_of_equal_patches_is_empty() {
        let p = generate_patch(&window(&[[0, 0], [0, 1]]), 5.0).unwrap();
        assert!(patch_difference(&p, &p).unwrap().is_empty());
        let q = generate_patch(&window(&[[0, 0], [0, 1]]), 6.0).unwrap();
        assert!(patch_difference(&p, &q).is_err());
    }

    #[test]
    fn rejects_bad_radius() {
        let w = window(&[[0, 0]]);
        assert!(generate_patch(&w, 0.0).is_err());
        assert!(generate_patch(&w, f64::NAN).is_err());
    }
}
