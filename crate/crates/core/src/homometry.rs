//! Homometric windows: distinct shapes with identical covariograms.
//!
//! Three routes are provided:
//!
//! * the Minkowski construction `U ⊕ V` versus `U ⊕ (-V)`, whose Fourier
//!   moduli agree because `|1̂_{U⊕V}| = |1̂_U|·|1̂_V|`;
//! * reconstruction of the homometric 15-cell pair behind the printed
//!   intensity formula, by expanding its two factors into difference
//!   multisets and searching for point sets realizing them;
//! * exhaustive search among fixed polyominoes in a box, and among integer
//!   sets on a line (Patterson's homometric sets).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::diffraction::{verify_closed_form, ClosedFormCheck};
use crate::error::{Error, Result};
use crate::window::{
    apply_isometry, covariogram_equal, normalize_cells, Cell, DiscreteAutocorrelation, Polyomino,
    SQUARE_ISOMETRIES,
};

/// Enumerations estimated above this many objects are refused.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

/// A finite set of integer points with no unit-cell meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointConfiguration {
    points: Vec<Cell>,
}

impl PointConfiguration {
    pub fn new(points: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if !set.insert(p) {
                return Err(Error::DuplicatePoint { point: p });
            }
        }
        if set.is_empty() {
            return Err(Error::InvalidParameter("point configuration is empty".into()));
        }
        Ok(PointConfiguration {
            points: set.into_iter().collect(),
        })
    }

    /// Points on the x-axis.
    pub fn on_line(xs: &[i64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| [x, 0]))
    }

    pub fn points(&self) -> &[Cell] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn negated(&self) -> Self {
        let mut points: Vec<Cell> = self.points.iter().map(|p| [-p[0], -p[1]]).collect();
        points.sort_unstable();
        PointConfiguration { points }
    }

    pub fn normalized(&self) -> Self {
        PointConfiguration {
            points: normalize_cells(&self.points),
        }
    }

    pub fn differences(&self) -> DiscreteAutocorrelation {
        DiscreteAutocorrelation::from_points(&self.points)
    }
}

/// `{a + b : a ∈ u, b ∈ v}` as a polyomino; the sum must be direct.
pub fn minkowski_polyomino(u: &PointConfiguration, v: &PointConfiguration) -> Result<Polyomino> {
    let mut cells = BTreeSet::new();
    for a in u.points() {
        for b in v.points() {
            let c = [a[0] + b[0], a[1] + b[1]];
            if !cells.insert(c) {
                return Err(Error::OverlappingSum { cell: c });
            }
        }
    }
    Polyomino::new(cells, false)
}

/// A trigonometric polynomial `Σ c_m cos(π m·k)` with rational coefficients.
///
/// Frequencies are stored up to sign (cosine is even).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CosineSum {
    terms: BTreeMap<Cell, Ratio<i64>>,
}

fn canonical_frequency(m: Cell) -> Cell {
    if m < [0, 0] {
        [-m[0], -m[1]]
    } else {
        m
    }
}

impl CosineSum {
    pub fn constant(c: i64) -> Self {
        CosineSum::default().plus(c, [0, 0])
    }

    /// Add `c · cos(π m·k)`.
    pub fn plus(mut self, c: i64, m: Cell) -> Self {
        self.add_term(Ratio::from_integer(c), m);
        self
    }

    fn add_term(&mut self, c: Ratio<i64>, m: Cell) {
        let e = self.terms.entry(canonical_frequency(m)).or_insert_with(Ratio::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&canonical_frequency(m));
        }
    }

    pub fn add(mut self, other: &CosineSum) -> Self {
        for (m, c) in &other.terms {
            self.add_term(*c, *m);
        }
        self
    }

    pub fn scale(mut self, c: i64) -> Self {
        for v in self.terms.values_mut() {
            *v *= c;
        }
        self
    }

    /// Product by `cos a · cos b = (cos(a+b) + cos(a-b)) / 2`.
    pub fn mul(&self, other: &CosineSum) -> Self {
        let mut out = CosineSum::default();
        let half = Ratio::new(1, 2);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = *ca * *cb * half;
                out.add_term(c, [a[0] + b[0], a[1] + b[1]]);
                out.add_term(c, [a[0] - b[0], a[1] - b[1]]);
            }
        }
        out
    }

    pub fn eval(&self, k: [f64; 2]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                c.to_f64().unwrap_or(f64::NAN)
                    * (std::f64::consts::PI * (m[0] as f64 * k[0] + m[1] as f64 * k[1])).cos()
            })
            .sum()
    }

    /// Read the sum as `Σ_d N(d) cos(2π d·k)`, the squared Fourier modulus of
    /// a point set. `None` if a frequency is odd or a count is not a
    /// nonnegative integer.
    pub fn to_difference_counts(&self) -> Option<DiscreteAutocorrelation> {
        let mut counts = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[0] % 2 != 0 || m[1] % 2 != 0 {
                return None;
            }
            let d = [m[0] / 2, m[1] / 2];
            if d == [0, 0] {
                counts.insert(d, c.to_integer().try_into().ok().filter(|_| c.is_integer())?);
            } else {
                let half = *c / 2;
                if !half.is_integer() || half < Ratio::zero() {
                    return None;
                }
                let n: u64 = half.to_integer().try_into().ok()?;
                counts.insert(d, n);
                counts.insert([-d[0], -d[1]], n);
            }
        }
        Some(DiscreteAutocorrelation::from_counts(counts))
    }
}

/// The two factors of `f(κ, λ)` as printed, with `k = (κ, λ)` and each term
/// `cos(π m·k)` written by its integer frequency `m`.
pub fn printed_factors() -> [CosineSum; 2] {
    let c = |coef: i64, m: Cell| CosineSum::default().plus(coef, m);
    // 3 + 2 cos(2πλ) + 4 cos(πλ) cos(π(2κ + 3λ))
    let first = CosineSum::constant(3)
        .plus(2, [0, 2])
        .add(&c(4, [0, 1]).mul(&c(1, [2, 3])));
    // 5 + 6 cos(2πκ) + 2 cos(4πκ) + 4 (2 cos(πκ) + cos(3πκ)) cos(π(3κ + 6λ))
    let second = CosineSum::constant(5)
        .plus(6, [2, 0])
        .plus(2, [4, 0])
        .add(&c(2, [1, 0]).plus(1, [3, 0]).scale(4).mul(&c(1, [3, 6])));
    [first, second]
}

/// All point sets of the given size inside a `box_w × box_h` box, normalized
/// to touch both axes, whose difference counts equal `target`.
pub fn configurations_with_differences(
    target: &DiscreteAutocorrelation,
    size: usize,
    box_w: i64,
    box_h: i64,
) -> Vec<PointConfiguration> {
    if target.total() != (size * size) as u64 || target.get([0, 0]) != size as u64 {
        return Vec::new();
    }
    let cells: Vec<Cell> = (0..box_h)
        .flat_map(|y| (0..box_w).map(move |x| [x, y]))
        .collect();
    let mut found = Vec::new();
    let mut chosen = Vec::with_capacity(size);
    let mut counts: HashMap<Cell, u64> = HashMap::new();
    extend_configuration(target, size, &cells, 0, &mut chosen, &mut counts, &mut found);
    found.sort();
    found
}

fn extend_configuration(
    target: &DiscreteAutocorrelation,
    size: usize,
    cells: &[Cell],
    from: usize,
    chosen: &mut Vec<Cell>,
    counts: &mut HashMap<Cell, u64>,
    found: &mut Vec<PointConfiguration>,
) {
    if chosen.len() == size {
        let touches_x = chosen.iter().any(|c| c[0] == 0);
        let touches_y = chosen.iter().any(|c| c[1] == 0);
        if touches_x && touches_y {
            found.push(PointConfiguration {
                points: chosen.clone(),
            });
        }
        return;
    }
    for i in from..cells.len() {
        let c = cells[i];
        let mut ok = true;
        let mut added = Vec::new();
        for s in chosen.iter() {
            for d in [[c[0] - s[0], c[1] - s[1]], [s[0] - c[0], s[1] - c[1]]] {
                let e = counts.entry(d).or_insert(0);
                *e += 1;
                added.push(d);
                if *e > target.get(d) {
                    ok = false;
                }
            }
        }
        if ok {
            chosen.push(c);
            extend_configuration(target, size, cells, i + 1, chosen, counts, found);
            chosen.pop();
        }
        for d in added {
            *counts.get_mut(&d).expect("just inserted") -= 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomometricPairReport {
    pub left: Polyomino,
    pub right: Polyomino,
    pub congruent: bool,
    /// The shared discrete autocorrelation.
    pub certificate: DiscreteAutocorrelation,
}

impl HomometricPairReport {
    fn new(left: Polyomino, right: Polyomino) -> Self {
        debug_assert!(covariogram_equal(&left, &right));
        HomometricPairReport {
            congruent: left.congruent(&right),
            certificate: left.autocorrelation(),
            left,
            right,
        }
    }
}

/// The verified homometric pair behind the printed intensity formula.
#[derive(Clone, Debug)]
pub struct OctagonalPair {
    pub report: HomometricPairReport,
    /// Minkowski factors with `left = u ⊕ v`.
    pub u: PointConfiguration,
    pub v: PointConfiguration,
    /// Cells shared by the two windows, both placed at the default anchor
    /// with their bounding boxes at the origin.
    pub shared_cells: usize,
    pub closed_form: [ClosedFormCheck; 2],
}

pub const PAIR_CELLS: usize = 15;
pub const PAIR_FACTOR_SIZES: [usize; 2] = [3, 5];
pub const PAIR_SEARCH_BOX: [i64; 2] = [5, 7];

/// Rebuild the homometric 15-cell windows from the printed `f(κ, λ)`.
///
/// The factors are expanded into difference counts, all 3- and 5-point
/// configurations realizing them are found by exhaustive search, and every
/// candidate pair `u ⊕ v` against `(-u) ⊕ v` or `u ⊕ (-v)` is checked for
/// direct sums, connectivity, 15 cells, equal covariograms, non-congruence
/// and agreement with the closed-form intensity. Among passing candidates the
/// pair sharing the most cells (at the common placement) is returned.
pub fn reconstruct_octagonal_pair() -> Result<OctagonalPair> {
    let [f1, f2] = printed_factors();
    let t1 = f1
        .to_difference_counts()
        .ok_or_else(|| Error::ReconstructionFailed("first factor is not a difference spectrum".into()))?;
    let t2 = f2
        .to_difference_counts()
        .ok_or_else(|| Error::ReconstructionFailed("second factor is not a difference spectrum".into()))?;
    let [bw, bh] = PAIR_SEARCH_BOX;
    let us = configurations_with_differences(&t1, PAIR_FACTOR_SIZES[0], bw, bh);
    let vs = configurations_with_differences(&t2, PAIR_FACTOR_SIZES[1], bw, bh);
    if us.is_empty() || vs.is_empty() {
        return Err(Error::ReconstructionFailed(format!(
            "factor search found {} three-point and {} five-point configurations",
            us.len(),
            vs.len()
        )));
    }

    let mut best: Option<OctagonalPair> = None;
    let mut partial = String::from("no candidate formed direct connected sums");
    for u in &us {
        for v in &vs {
            for (pu, pv) in [(u.negated(), v.clone()), (u.clone(), v.negated())] {
                match check_candidate(u, v, &pu, &pv) {
                    Ok(pair) => {
                        if best.as_ref().map_or(true, |b| pair.shared_cells > b.shared_cells) {
                            best = Some(pair);
                        }
                    }
                    Err(why) => partial = why,
                }
            }
        }
    }
    best.ok_or_else(|| Error::ReconstructionFailed(format!("best partial match: {partial}")))
}

fn check_candidate(
    u: &PointConfiguration,
    v: &PointConfiguration,
    pu: &PointConfiguration,
    pv: &PointConfiguration,
) -> std::result::Result<OctagonalPair, String> {
    let left = minkowski_polyomino(u, v).map_err(|e| e.to_string())?;
    let right = minkowski_polyomino(pu, pv).map_err(|e| e.to_string())?;
    let left = Polyomino::new(normalize_cells(left.cells()), true).map_err(|e| format!("left: {e}"))?;
    let right = Polyomino::new(normalize_cells(right.cells()), true).map_err(|e| format!("right: {e}"))?;
    if left.area() != PAIR_CELLS || right.area() != PAIR_CELLS {
        return Err(format!("cell counts {} and {}", left.area(), right.area()));
    }
    if !covariogram_equal(&left, &right) {
        return Err("covariograms differ".into());
    }
    if left.congruent(&right) {
        return Err("windows are congruent".into());
    }
    let c1 = verify_closed_form(&left).map_err(|e| format!("left: {e}"))?;
    let c2 = verify_closed_form(&right).map_err(|e| format!("right: {e}"))?;
    let shared = left.cells().iter().filter(|c| right.contains_cell(**c)).count();
    Ok(OctagonalPair {
        report: HomometricPairReport::new(left, right),
        u: u.clone(),
        v: v.clone(),
        shared_cells: shared,
        closed_form: [c1, c2],
    })
}

/// Number of fixed polyominoes with `n` cells (OEIS A001168), used as the
/// enumeration estimate.
pub const FIXED_POLYOMINO_COUNTS: [u128; 20] = [
    1,
    2,
    6,
    19,
    63,
    216,
    760,
    2725,
    9910,
    36446,
    135268,
    505861,
    1903890,
    7204874,
    27394666,
    104592937,
    400795844,
    1540820542,
    5940738676,
    22964779660,
];

fn polyomino_estimate(n: usize) -> u128 {
    FIXED_POLYOMINO_COUNTS.get(n - 1).copied().unwrap_or(u128::MAX)
}

/// Redelmeier enumeration of fixed polyominoes with `n` cells that fit a
/// `box_w × box_h` box. Each is reported once, normalized.
struct FixedEnumerator {
    n: usize,
    box_w: i64,
    box_h: i64,
    stride: i64,
}

#[derive(Clone)]
struct GrowthState {
    poly: Vec<Cell>,
    untried: Vec<Cell>,
    seen: Vec<bool>,
}

impl FixedEnumerator {
    fn new(n: usize, box_w: i64, box_h: i64) -> Self {
        FixedEnumerator {
            n,
            box_w,
            box_h,
            stride: 2 * n as i64 - 1,
        }
    }

    /// Cells live in `y > 0` or `y = 0, x ≥ 0` relative to the root.
    fn index(&self, c: Cell) -> Option<usize> {
        let r = self.n as i64 - 1;
        let allowed = c[1] > 0 || (c[1] == 0 && c[0] >= 0);
        (allowed && c[0].abs() <= r && c[1] <= r).then(|| (c[1] * self.stride + c[0] + r) as usize)
    }

    fn fits(&self, poly: &[Cell]) -> bool {
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for c in poly {
            x0 = x0.min(c[0]);
            x1 = x1.max(c[0]);
            y0 = y0.min(c[1]);
            y1 = y1.max(c[1]);
        }
        x1 - x0 < self.box_w && y1 - y0 < self.box_h
    }

    fn root(&self) -> GrowthState {
        let mut seen = vec![false; (self.stride * self.n as i64) as usize];
        seen[self.index([0, 0]).expect("root")] = true;
        GrowthState {
            poly: Vec::with_capacity(self.n),
            untried: vec![[0, 0]],
            seen,
        }
    }

    /// Grow from `state`. Complete polyominoes go to `emit`; with a `split`
    /// size, partial states of that size are pushed to `frontier` instead of
    /// being explored.
    fn grow(
        &self,
        state: &mut GrowthState,
        split: Option<usize>,
        frontier: &mut Vec<GrowthState>,
        emit: &mut dyn FnMut(&[Cell]),
    ) {
        let mut untried = std::mem::take(&mut state.untried);
        while let Some(c) = untried.pop() {
            state.poly.push(c);
            if self.fits(&state.poly) {
                if state.poly.len() == self.n {
                    emit(&state.poly);
                } else {
                    let mut fresh = Vec::new();
                    for nb in [[c[0] + 1, c[1]], [c[0] - 1, c[1]], [c[0], c[1] + 1], [c[0], c[1] - 1]] {
                        if let Some(i) = self.index(nb) {
                            if !state.seen[i] {
                                state.seen[i] = true;
                                fresh.push(i);
                                untried.push(nb);
                            }
                        }
                    }
                    let added = fresh.len();
                    let next: Vec<Cell> = untried.clone();
                    for _ in 0..added {
                        untried.pop();
                    }
                    if split == Some(state.poly.len()) {
                        frontier.push(GrowthState {
                            poly: state.poly.clone(),
                            untried: next,
                            seen: state.seen.clone(),
                        });
                    } else {
                        state.untried = next;
                        self.grow(state, split, frontier, emit);
                    }
                    for i in fresh {
                        state.seen[i] = false;
                    }
                }
            }
            state.poly.pop();
        }
    }
}

/// Visit every fixed polyomino with `n` cells fitting `box_w × box_h`,
/// normalized, in parallel. `fold` accumulates per worker; `merge` combines.
fn for_each_fixed<A, F, M>(n: usize, box_w: i64, box_h: i64, init: A, fold: F, merge: M) -> A
where
    A: Clone + Send + Sync,
    F: Fn(&mut A, Vec<Cell>) + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    let en = FixedEnumerator::new(n, box_w, box_h);
    let split = if n > 6 { Some(5) } else { None };
    let mut frontier = Vec::new();
    let mut acc = init.clone();
    let mut root = en.root();
    en.grow(&mut root, split, &mut frontier, &mut |p| fold(&mut acc, normalize_cells(p)));
    let rest = frontier
        .into_par_iter()
        .fold(
            || init.clone(),
            |mut a, mut st| {
                let mut local = Vec::new();
                en.grow(&mut st, None, &mut local, &mut |p| fold(&mut a, normalize_cells(p)));
                a
            },
        )
        .reduce(|| init.clone(), &merge);
    merge(acc, rest)
}

/// All fixed polyominoes with `n` cells fitting the box, sorted.
pub fn enumerate_fixed_polyominoes(n: usize, box_w: i64, box_h: i64) -> Result<Vec<Vec<Cell>>> {
    check_polyomino_budget(n, box_w, box_h)?;
    let mut all = for_each_fixed(
        n,
        box_w,
        box_h,
        Vec::new(),
        |acc: &mut Vec<Vec<Cell>>, p| acc.push(p),
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    all.sort_unstable();
    Ok(all)
}

fn check_polyomino_budget(n: usize, box_w: i64, box_h: i64) -> Result<()> {
    if n == 0 || box_w <= 0 || box_h <= 0 {
        return Err(Error::InvalidParameter(
            "cell count and box dimensions must be positive".into(),
        ));
    }
    let estimate = polyomino_estimate(n);
    if estimate > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            estimate,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

fn fits_box(cells: &[Cell], box_w: i64, box_h: i64) -> bool {
    let w = cells.iter().map(|c| c[0]).max().unwrap_or(0) + 1;
    let h = cells.iter().map(|c| c[1]).max().unwrap_or(0) + 1;
    w <= box_w && h <= box_h
}

/// Dense difference counts `N(d)` over `d ∈ [-(n-1), n-1]²`, row-major.
/// For a fixed `n` this is an exact, injective encoding of the discrete
/// autocorrelation.
fn dense_fingerprint(cells: &[Cell]) -> Vec<u16> {
    let r = cells.len() as i64 - 1;
    let side = 2 * r + 1;
    let mut counts = vec![0u16; (side * side) as usize];
    for a in cells {
        for b in cells {
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            counts[((dy + r) * side + dx + r) as usize] += 1;
        }
    }
    counts
}

/// Minimum dense fingerprint over the square symmetries. Since `P` and `-P`
/// share a fingerprint, one isometry per coset of `{±1}` suffices.
fn free_fingerprint(cells: &[Cell]) -> Vec<u16> {
    [0usize, 1, 4, 6]
        .iter()
        .map(|&i| {
            let moved: Vec<Cell> = cells.iter().map(|&c| apply_isometry(&SQUARE_ISOMETRIES[i], c)).collect();
            dense_fingerprint(&moved)
        })
        .min()
        .expect("nonempty")
}

fn fingerprint_hash(fp: &[u16]) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    fp.hash(&mut h);
    h.finish()
}

/// A normalized polyomino of at most 64 bounding-box cells as
/// `(width, row-major bitmask)`.
type PackedCells = (u8, u64);

fn pack(cells: &[Cell]) -> Option<PackedCells> {
    let w = cells.iter().map(|c| c[0]).max()? + 1;
    let h = cells.iter().map(|c| c[1]).max()? + 1;
    if w * h > 64 {
        return None;
    }
    let mask = cells.iter().fold(0u64, |m, c| m | 1 << (c[1] * w + c[0]));
    Some((w as u8, mask))
}

fn unpack((w, mask): PackedCells) -> Vec<Cell> {
    let w = w as i64;
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| [i % w, i / w])
        .collect()
}

/// Whether `cells` is the smallest among its orientations that fit the box.
fn is_orientation_representative(cells: &[Cell], box_w: i64, box_h: i64) -> bool {
    SQUARE_ISOMETRIES.iter().all(|m| {
        let moved: Vec<Cell> = cells.iter().map(|&c| apply_isometry(m, c)).collect();
        let moved = normalize_cells(&moved);
        !fits_box(&moved, box_w, box_h) || moved.as_slice() >= cells
    })
}

/// All non-congruent homometric pairs among connected `n`-cell polyominoes
/// fitting a `box_w × box_h` box.
///
/// Fixed polyominoes are enumerated and one orientation per congruence class
/// is kept. Classes are bucketed by a hash of their autocorrelation
/// (minimized over the square symmetries) and paired only on exact equality
/// of that autocorrelation. Within a pair the right member is rotated or
/// reflected so that the two have equal covariograms as placed.
pub fn search_polyomino_pairs(n: usize, box_w: i64, box_h: i64) -> Result<Vec<HomometricPairReport>> {
    search_polyomino_pairs_filtered(n, box_w, box_h, |_| true)
}

/// As [`search_polyomino_pairs`], restricted to class representatives
/// (normalized cell lists) accepted by `filter`.
pub fn search_polyomino_pairs_filtered<F>(
    n: usize,
    box_w: i64,
    box_h: i64,
    filter: F,
) -> Result<Vec<HomometricPairReport>>
where
    F: Fn(&[Cell]) -> bool + Sync,
{
    check_polyomino_budget(n, box_w, box_h)?;
    type Buckets = HashMap<u64, Vec<PackedCells>>;
    let buckets: Buckets = for_each_fixed(
        n,
        box_w,
        box_h,
        Buckets::new(),
        |acc: &mut Buckets, p| {
            if is_orientation_representative(&p, box_w, box_h) {
                let packed = pack(&p).expect("budgeted polyominoes have small bounding boxes");
                acc.entry(fingerprint_hash(&free_fingerprint(&p))).or_default().push(packed);
            }
        },
        |mut a, b| {
            for (k, mut v) in b {
                a.entry(k).or_default().append(&mut v);
            }
            a
        },
    );

    let mut groups: BTreeMap<Vec<u16>, Vec<Vec<Cell>>> = BTreeMap::new();
    for members in buckets.into_values().filter(|v| v.len() > 1) {
        for packed in members {
            let cells = unpack(packed);
            groups.entry(free_fingerprint(&cells)).or_default().push(cells);
        }
    }
    let mut reports = Vec::new();
    // Filtering after grouping yields the same pairs as filtering first, and
    // only touches the few classes that share an autocorrelation.
    for mut members in groups.into_values() {
        members.retain(|c| filter(c));
        members.sort_unstable();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let left = Polyomino::new(members[i].iter().copied(), true)?;
                let base = Polyomino::new(members[j].iter().copied(), true)?;
                let right = SQUARE_ISOMETRIES
                    .iter()
                    .map(|m| base.transformed(m).normalized())
                    .find(|r| covariogram_equal(&left, r))
                    .expect("equal free fingerprints imply a homometric orientation");
                let report = HomometricPairReport::new(left, right);
                if !report.congruent {
                    reports.push(report);
                }
            }
        }
    }
    Ok(reports)
}

/// Whether `cells` is a direct Minkowski sum of point sets of the given
/// sizes (with the first factor containing the origin after normalization).
pub fn is_minkowski_decomposable(cells: &[Cell], sizes: [usize; 2]) -> bool {
    let [a, b] = sizes;
    if cells.len() != a * b || cells.is_empty() {
        return false;
    }
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    // Take v to contain the smallest cell c0 as its origin-translate: then
    // every u-point is a translate vector t with c0 + t in the set. Try all
    // a-subsets of translation vectors containing 0.
    let c0 = cells[0];
    let shifts: Vec<Cell> = cells.iter().map(|c| [c[0] - c0[0], c[1] - c0[1]]).collect();
    let mut chosen = vec![[0, 0]];
    fn rec(
        shifts: &[Cell],
        from: usize,
        a: usize,
        chosen: &mut Vec<Cell>,
        set: &BTreeSet<Cell>,
        b: usize,
    ) -> bool {
        if chosen.len() == a {
            // v = cells that stay in the set under every chosen shift.
            let v: Vec<Cell> = set
                .iter()
                .copied()
                .filter(|c| chosen.iter().all(|t| set.contains(&[c[0] + t[0], c[1] + t[1]])))
                .collect();
            if v.len() < b {
                return false;
            }
            // Need a b-subset of v whose sums with `chosen` tile the set.
            let mut pick = Vec::new();
            return pick_tiling(&v, 0, b, chosen, set, &mut pick);
        }
        for i in from..shifts.len() {
            if shifts[i] == [0, 0] {
                continue;
            }
            chosen.push(shifts[i]);
            if rec(shifts, i + 1, a, chosen, set, b) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    fn pick_tiling(
        v: &[Cell],
        from: usize,
        b: usize,
        u: &[Cell],
        set: &BTreeSet<Cell>,
        pick: &mut Vec<Cell>,
    ) -> bool {
        if pick.len() == b {
            let mut covered = BTreeSet::new();
            for p in pick.iter() {
                for t in u {
                    if !covered.insert([p[0] + t[0], p[1] + t[1]]) {
                        return false;
                    }
                }
            }
            return covered == *set;
        }
        for i in from..v.len() {
            pick.push(v[i]);
            if pick_tiling(v, i + 1, b, u, set, pick) {
                return true;
            }
            pick.pop();
        }
        false
    }
    rec(&shifts, 0, a, &mut chosen, &set, b)
}

/// Saturates at `u128::MAX`, which is far past any budget.
fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// The full difference multiset `{a - b : a, b ∈ S}`, sorted.
pub fn difference_multiset_1d(set: &[i64]) -> Vec<i64> {
    let mut d: Vec<i64> = set.iter().flat_map(|a| set.iter().map(move |b| a - b)).collect();
    d.sort_unstable();
    d
}

pub type IntegerSetPair = (Vec<i64>, Vec<i64>);

/// Pairs of `n_points`-subsets of `{0..=max_coord}` containing both ends,
/// with equal difference multisets and not mirror images of each other.
pub fn search_1d_pairs(n_points: usize, max_coord: i64) -> Result<Vec<IntegerSetPair>> {
    if max_coord < 0 {
        return Err(Error::InvalidParameter("max_coord must be nonnegative".into()));
    }
    let estimate = binomial(max_coord as u64 + 1, n_points as u64);
    if estimate > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            estimate,
            budget: ENUMERATION_BUDGET,
        });
    }
    if n_points < 2 || (max_coord as usize + 1) < n_points || max_coord == 0 {
        return Ok(Vec::new());
    }
    let inner = n_points - 2;
    let mut groups: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    let mut mid: Vec<i64> = Vec::with_capacity(inner);
    fn rec(
        from: i64,
        max_coord: i64,
        inner: usize,
        mid: &mut Vec<i64>,
        groups: &mut BTreeMap<Vec<i64>, Vec<Vec<i64>>>,
    ) {
        if mid.len() == inner {
            let mut set = Vec::with_capacity(inner + 2);
            set.push(0);
            set.extend_from_slice(mid);
            set.push(max_coord);
            let key: Vec<i64> = difference_multiset_1d(&set).into_iter().filter(|d| *d > 0).collect();
            groups.entry(key).or_default().push(set);
            return;
        }
        for x in from..max_coord {
            mid.push(x);
            rec(x + 1, max_coord, inner, mid, groups);
            mid.pop();
        }
    }
    rec(1, max_coord, inner, &mut mid, &mut groups);
    let mut pairs = Vec::new();
    for members in groups.values() {
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let mut mirror: Vec<i64> = members[i].iter().map(|x| max_coord - x).collect();
                mirror.sort_unstable();
                if mirror != members[j] {
                    pairs.push((members[i].clone(), members[j].clone()));
                }
            }
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// First `(n_points, max_coord)` in lexicographic order with a nonempty
/// [`search_1d_pairs`] result.
pub fn smallest_1d_pairs(
    max_points: usize,
    max_coord: i64,
) -> Result<Option<(usize, i64, Vec<IntegerSetPair>)>> {
    for n in 2..=max_points {
        for m in (n as i64 - 1)..=max_coord {
            let pairs = search_1d_pairs(n, m)?;
            if !pairs.is_empty() {
                return Ok(Some((n, m, pairs)));
            }
        }
    }
    Ok(None)
}
