//! Polyomino windows and their covariograms.
//!
//! A polyomino is a finite set of unit cells `c + [0,1)²`. Its covariogram
//! `g(v) = vol(P ∩ (P + v))` is determined by the integer autocorrelation
//! `N(d) = #{(c, c') : c' - c = d}` through
//!
//! ```text
//! g(v) = Σ_d N(d) · Λ(v_x - d_x) · Λ(v_y - d_y),    Λ(t) = max(0, 1 - |t|)
//! ```
//!
//! so everything here is exact: rational shifts give rational values, and
//! shifts in `ℚ(√2)` give values in `ℚ(√2)`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::quad::{Rational, Surd};

pub type Cell = [i64; 2];

/// The eight symmetries of the square lattice fixing the origin, as integer
/// matrices acting on column vectors.
pub const SQUARE_ISOMETRIES: [[[i64; 2]; 2]; 8] = [
    [[1, 0], [0, 1]],
    [[0, -1], [1, 0]],
    [[-1, 0], [0, -1]],
    [[0, 1], [-1, 0]],
    [[-1, 0], [0, 1]],
    [[1, 0], [0, -1]],
    [[0, 1], [1, 0]],
    [[0, -1], [-1, 0]],
];

pub fn apply_isometry(m: &[[i64; 2]; 2], c: Cell) -> Cell {
    [m[0][0] * c[0] + m[0][1] * c[1], m[1][0] * c[0] + m[1][1] * c[1]]
}

/// Translate so the smallest x and the smallest y are both zero; sort.
pub fn normalize_cells(cells: &[Cell]) -> Vec<Cell> {
    let mx = cells.iter().map(|c| c[0]).min().unwrap_or(0);
    let my = cells.iter().map(|c| c[1]).min().unwrap_or(0);
    let mut out: Vec<Cell> = cells.iter().map(|c| [c[0] - mx, c[1] - my]).collect();
    out.sort_unstable();
    out
}

pub fn is_edge_connected(cells: &[Cell]) -> bool {
    let Some(&start) = cells.first() else {
        return true;
    };
    let set: HashSet<Cell> = cells.iter().copied().collect();
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some([x, y]) = queue.pop_front() {
        for nb in [[x + 1, y], [x - 1, y], [x, y + 1], [x, y - 1]] {
            if set.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen.len() == set.len()
}

/// A polyomino together with the offset used when it serves as a window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyomino {
    cells: Vec<Cell>,
    anchor: [Ratio<i64>; 2],
    connectivity_enforced: bool,
}

impl Polyomino {
    /// Anchor `(-1/2, -1/2)`: a cell at the origin is centred on zero.
    pub fn default_anchor() -> [Ratio<i64>; 2] {
        [Ratio::new(-1, 2), Ratio::new(-1, 2)]
    }

    pub fn new(cells: impl IntoIterator<Item = Cell>, enforce_connected: bool) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in cells {
            if !seen.insert(c) {
                return Err(Error::DuplicateCell { line: 0, cell: c });
            }
        }
        if seen.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let cells: Vec<Cell> = seen.into_iter().collect();
        if enforce_connected && !is_edge_connected(&cells) {
            return Err(Error::Disconnected);
        }
        Ok(Polyomino {
            cells,
            anchor: Self::default_anchor(),
            connectivity_enforced: enforce_connected,
        })
    }

    pub fn with_anchor(mut self, anchor: [Ratio<i64>; 2]) -> Self {
        self.anchor = anchor;
        self
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn anchor(&self) -> [Ratio<i64>; 2] {
        self.anchor
    }

    pub fn connectivity_enforced(&self) -> bool {
        self.connectivity_enforced
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    pub fn contains_cell(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        is_edge_connected(&self.cells)
    }

    /// `(min, max)` cell indices per axis.
    pub fn bounding_box(&self) -> (Cell, Cell) {
        let mut lo = self.cells[0];
        let mut hi = self.cells[0];
        for c in &self.cells {
            for j in 0..2 {
                lo[j] = lo[j].min(c[j]);
                hi[j] = hi[j].max(c[j]);
            }
        }
        (lo, hi)
    }

    fn map_cells(&self, f: impl Fn(Cell) -> Cell) -> Self {
        let mut cells: Vec<Cell> = self.cells.iter().map(|&c| f(c)).collect();
        cells.sort_unstable();
        Polyomino {
            cells,
            anchor: self.anchor,
            connectivity_enforced: self.connectivity_enforced,
        }
    }

    pub fn translated(&self, t: Cell) -> Self {
        self.map_cells(|c| [c[0] + t[0], c[1] + t[1]])
    }

    /// Cell-wise negation `c ↦ -c`. The point set `-P` is `(-c - 1) + [0,1)²`
    /// per cell; the two differ by a translation, which the covariogram and
    /// congruence tests ignore.
    pub fn negated(&self) -> Self {
        self.map_cells(|c| [-c[0], -c[1]])
    }

    pub fn transformed(&self, m: &[[i64; 2]; 2]) -> Self {
        self.map_cells(|c| apply_isometry(m, c))
    }

    /// Same shape moved so that the bounding box starts at the origin.
    pub fn normalized(&self) -> Self {
        Polyomino {
            cells: normalize_cells(&self.cells),
            anchor: self.anchor,
            connectivity_enforced: self.connectivity_enforced,
        }
    }

    /// Smallest normalized cell list over the eight square symmetries.
    pub fn free_canonical(&self) -> Vec<Cell> {
        SQUARE_ISOMETRIES
            .iter()
            .map(|m| {
                let moved: Vec<Cell> = self.cells.iter().map(|&c| apply_isometry(m, c)).collect();
                normalize_cells(&moved)
            })
            .min()
            .expect("eight isometries")
    }

    /// Congruent under a square-lattice isometry plus translation.
    pub fn congruent(&self, other: &Polyomino) -> bool {
        self.area() == other.area() && self.free_canonical() == other.free_canonical()
    }

    /// Cells of `self` not in `other`, keeping the anchor of `self`.
    pub fn cell_difference(&self, other: &Polyomino) -> Option<Polyomino> {
        let cells: Vec<Cell> = self
            .cells
            .iter()
            .copied()
            .filter(|c| !other.contains_cell(*c))
            .collect();
        if cells.is_empty() {
            return None;
        }
        Some(Polyomino {
            cells,
            anchor: self.anchor,
            connectivity_enforced: false,
        })
    }

    pub fn autocorrelation(&self) -> DiscreteAutocorrelation {
        discrete_autocorrelation(self)
    }
}

/// `N(d)` for all offsets `d` occurring in `P - P`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscreteAutocorrelation {
    counts: BTreeMap<Cell, u64>,
}

impl DiscreteAutocorrelation {
    pub fn from_points(points: &[Cell]) -> Self {
        let mut counts = BTreeMap::new();
        for a in points {
            for b in points {
                *counts.entry([b[0] - a[0], b[1] - a[1]]).or_insert(0) += 1;
            }
        }
        DiscreteAutocorrelation { counts }
    }

    pub fn from_counts(counts: BTreeMap<Cell, u64>) -> Self {
        DiscreteAutocorrelation { counts }
    }

    pub fn get(&self, d: Cell) -> u64 {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<Cell, u64> {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (Cell, u64)> + '_ {
        self.counts.iter().map(|(d, n)| (*d, *n))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn support(&self) -> BTreeSet<Cell> {
        self.counts.keys().copied().collect()
    }

    /// Exact covariogram at a shift with coordinates in `ℚ(√2)`.
    pub fn eval(&self, v: [Surd; 2]) -> Surd {
        let one = Surd::one();
        let mut acc = Surd::zero();
        // Only offsets within distance 1 per axis contribute; the float
        // prefilter is widened so it can never drop a contributing term.
        let vf = [v[0].to_f64(), v[1].to_f64()];
        for (d, n) in self.iter() {
            if (vf[0] - d[0] as f64).abs() >= 1.0 + 1e-9 || (vf[1] - d[1] as f64).abs() >= 1.0 + 1e-9 {
                continue;
            }
            let tx = one - (v[0] - Surd::int(d[0])).abs();
            let ty = one - (v[1] - Surd::int(d[1])).abs();
            if tx.signum() <= 0 || ty.signum() <= 0 {
                continue;
            }
            acc += Surd::int(n as i64) * tx * ty;
        }
        acc
    }

    pub fn eval_f64(&self, v: [f64; 2]) -> f64 {
        self.iter()
            .map(|(d, n)| n as f64 * tent(v[0] - d[0] as f64) * tent(v[1] - d[1] as f64))
            .sum()
    }

    /// Fourier transform of the covariogram as a closed cosine sum,
    /// `Σ_d N(d) cos(2π k·d) · sinc²(k_x) · sinc²(k_y)`.
    pub fn covariogram_transform(&self, k: [f64; 2]) -> f64 {
        let s: f64 = self
            .iter()
            .map(|(d, n)| n as f64 * (2.0 * PI * (k[0] * d[0] as f64 + k[1] * d[1] as f64)).cos())
            .sum();
        let sx = sinc(k[0]);
        let sy = sinc(k[1]);
        s * sx * sx * sy * sy
    }
}

fn tent(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

pub fn discrete_autocorrelation(p: &Polyomino) -> DiscreteAutocorrelation {
    DiscreteAutocorrelation::from_points(p.cells())
}

/// A covariogram value: exact in `ℚ(√2)` plus a float view.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovariogramValue {
    pub exact: Surd,
    pub approx: f64,
}

impl CovariogramValue {
    fn new(exact: Surd) -> Self {
        CovariogramValue {
            exact,
            approx: exact.to_f64(),
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.exact.as_rational()
    }
}

pub fn covariogram_eval(p: &Polyomino, v: [Surd; 2]) -> CovariogramValue {
    CovariogramValue::new(p.autocorrelation().eval(v))
}

pub fn covariogram_eval_rational(p: &Polyomino, v: [Ratio<i64>; 2]) -> CovariogramValue {
    covariogram_eval(p, v.map(Surd::from))
}

pub fn covariogram_equal(p: &Polyomino, q: &Polyomino) -> bool {
    p.area() == q.area() && p.autocorrelation() == q.autocorrelation()
}

/// `supp g = P - P`: the union of the open squares `d + (-1,1)²` over the
/// offsets with `N(d) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceBody {
    offsets: BTreeSet<Cell>,
}

impl DifferenceBody {
    pub fn offsets(&self) -> &BTreeSet<Cell> {
        &self.offsets
    }

    pub fn contains(&self, v: [f64; 2]) -> bool {
        let cx = v[0].round() as i64;
        let cy = v[1].round() as i64;
        (cx - 1..=cx + 1).any(|x| {
            (cy - 1..=cy + 1).any(|y| {
                self.offsets.contains(&[x, y])
                    && (v[0] - x as f64).abs() < 1.0
                    && (v[1] - y as f64).abs() < 1.0
            })
        })
    }

    pub fn contains_exact(&self, v: [Surd; 2]) -> bool {
        let one = Surd::one();
        let cx = v[0].to_f64().round() as i64;
        let cy = v[1].to_f64().round() as i64;
        (cx - 2..=cx + 2).any(|x| {
            (cy - 2..=cy + 2).any(|y| {
                self.offsets.contains(&[x, y])
                    && (v[0] - Surd::int(x)).abs() < one
                    && (v[1] - Surd::int(y)).abs() < one
            })
        })
    }

    /// Closed bounding box `[lo, hi]` of the support.
    pub fn bounding_box(&self) -> (Cell, Cell) {
        let mut lo = [i64::MAX; 2];
        let mut hi = [i64::MIN; 2];
        for d in &self.offsets {
            for j in 0..2 {
                lo[j] = lo[j].min(d[j] - 1);
                hi[j] = hi[j].max(d[j] + 1);
            }
        }
        (lo, hi)
    }

    /// Largest Euclidean norm over the closure of the support.
    pub fn circumradius(&self) -> f64 {
        self.offsets
            .iter()
            .map(|d| ((d[0].abs() + 1) as f64).hypot((d[1].abs() + 1) as f64))
            .fold(0.0, f64::max)
    }

    /// Unit segments making up the outer and inner boundary of the support.
    ///
    /// The support is the union of unit squares `[i,i+1]×[j,j+1]` that have a
    /// corner at some offset; boundary segments separate covered from
    /// uncovered squares.
    pub fn boundary_segments(&self) -> Vec<(Cell, Cell)> {
        let covered: BTreeSet<Cell> = self
            .offsets
            .iter()
            .flat_map(|d| [[d[0], d[1]], [d[0] - 1, d[1]], [d[0], d[1] - 1], [d[0] - 1, d[1] - 1]])
            .collect();
        let mut segs = Vec::new();
        for &[i, j] in &covered {
            if !covered.contains(&[i, j - 1]) {
                segs.push(([i, j], [i + 1, j]));
            }
            if !covered.contains(&[i, j + 1]) {
                segs.push(([i, j + 1], [i + 1, j + 1]));
            }
            if !covered.contains(&[i - 1, j]) {
                segs.push(([i, j], [i, j + 1]));
            }
            if !covered.contains(&[i + 1, j]) {
                segs.push(([i + 1, j], [i + 1, j + 1]));
            }
        }
        segs
    }
}

pub fn difference_body(p: &Polyomino) -> DifferenceBody {
    DifferenceBody {
        offsets: p.autocorrelation().support(),
    }
}

/// `sin(πt)/(πt)` with the removable singularity filled in.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        let x = PI * t;
        1.0 - x * x / 6.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

/// `∫_P e^{2πi k·y} dy` with `P` placed at its anchor.
pub fn window_fourier_transform(p: &Polyomino, k: [f64; 2]) -> Complex64 {
    let anchor = p.anchor().map(|a| *a.numer() as f64 / *a.denom() as f64);
    let envelope = sinc(k[0]) * sinc(k[1]);
    let phase_sum: Complex64 = p
        .cells()
        .iter()
        .map(|c| {
            let arg = PI
                * (k[0] * (2.0 * (c[0] as f64 + anchor[0]) + 1.0)
                    + k[1] * (2.0 * (c[1] as f64 + anchor[1]) + 1.0));
            Complex64::from_polar(1.0, arg)
        })
        .sum();
    phase_sum * envelope
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSample {
    pub v: [Rational; 2],
    pub value: Rational,
}

/// Covariogram samples on `step·ℤ²` covering the difference body.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariogramGrid {
    pub step: Ratio<i64>,
    /// Samples per axis.
    pub shape: [usize; 2],
    /// Row-major, y outer, both axes ascending.
    pub samples: Vec<GridSample>,
}

impl CovariogramGrid {
    pub fn value_at(&self, ix: usize, iy: usize) -> &GridSample {
        &self.samples[iy * self.shape[0] + ix]
    }
}

pub fn covariogram_grid(p: &Polyomino, step: Ratio<i64>) -> Result<CovariogramGrid> {
    if step <= Ratio::from_integer(0) {
        return Err(Error::InvalidParameter("grid step must be positive".into()));
    }
    let ac = p.autocorrelation();
    let (lo, hi) = difference_body(p).bounding_box();
    // The support is symmetric, so hi = -lo; sample i·step for |i·step| ≤ hi.
    let step_r = Rational::new(*step.numer() as i128, *step.denom() as i128);
    let half_extent = |h: i64| (Rational::from_integer(h as i128) / step_r).floor().to_integer() as i64;
    let (mx, my) = (half_extent(hi[0].max(-lo[0])), half_extent(hi[1].max(-lo[1])));
    let mut samples = Vec::with_capacity(((2 * mx + 1) * (2 * my + 1)) as usize);
    for iy in -my..=my {
        for ix in -mx..=mx {
            let v = [
                step_r * Rational::from_integer(ix as i128),
                step_r * Rational::from_integer(iy as i128),
            ];
            let value = ac
                .eval(v.map(Surd::rational))
                .as_rational()
                .expect("rational shift gives rational covariogram");
            samples.push(GridSample { v, value });
        }
    }
    Ok(CovariogramGrid {
        step,
        shape: [(2 * mx + 1) as usize, (2 * my + 1) as usize],
        samples,
    })
}
