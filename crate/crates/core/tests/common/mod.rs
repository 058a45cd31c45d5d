//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerical code paths.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use rand::Rng;

pub type Cell = [i64; 2];

/// The intensity prefactor exactly as printed: 3 + 2cos(2πλ) + 4cos(πλ)cos(π(2κ+3λ)) times
/// 5 + 6cos(2πκ) + 2cos(4πκ) + 4(2cos(πκ) + cos(3πκ))cos(π(3κ+6λ)).
pub fn printed_f(k: f64, l: f64) -> f64 {
    let c = |x: f64| (PI * x).cos();
    let a = 3.0 + 2.0 * c(2.0 * l) + 4.0 * c(l) * c(2.0 * k + 3.0 * l);
    let b = 5.0 + 6.0 * c(2.0 * k) + 2.0 * c(4.0 * k) + 4.0 * (2.0 * c(k) + c(3.0 * k)) * c(3.0 * k + 6.0 * l);
    a * b
}

/// `f/16 · (sin πκ sin πλ / (π²κλ))²`, limits taken by hand at zero.
pub fn printed_intensity(k: f64, l: f64) -> f64 {
    let s = |x: f64| if x == 0.0 { 1.0 } else { (PI * x).sin() / (PI * x) };
    printed_f(k, l) / 16.0 * (s(k) * s(l)).powi(2)
}

/// `|∫_P e^{2πik·y} dy|²` by integrating each unit cell directly.
pub fn ft_modulus_sq(cells: &[Cell], anchor: [f64; 2], k: [f64; 2]) -> f64 {
    // ∫_a^{a+1} e^{2πiks} ds as (re, im).
    let axis = |a: f64, k: f64| -> (f64, f64) {
        if k == 0.0 {
            return (1.0, 0.0);
        }
        let w = 2.0 * PI * k;
        // (e^{iw(a+1)} - e^{iwa}) / (iw)
        let (re, im) = ((w * (a + 1.0)).cos() - (w * a).cos(), (w * (a + 1.0)).sin() - (w * a).sin());
        (im / w, -re / w)
    };
    let (mut re, mut im) = (0.0, 0.0);
    for c in cells {
        let (xr, xi) = axis(c[0] as f64 + anchor[0], k[0]);
        let (yr, yi) = axis(c[1] as f64 + anchor[1], k[1]);
        re += xr * yr - xi * yi;
        im += xr * yi + xi * yr;
    }
    re * re + im * im
}

pub fn difference_counts(cells: &[Cell]) -> BTreeMap<Cell, u64> {
    let mut m = BTreeMap::new();
    for a in cells {
        for b in cells {
            *m.entry([b[0] - a[0], b[1] - a[1]]).or_insert(0) += 1;
        }
    }
    m
}

fn normalized(cells: impl Iterator<Item = Cell>) -> BTreeSet<Cell> {
    let v: Vec<Cell> = cells.collect();
    let mx = v.iter().map(|c| c[0]).min().unwrap();
    let my = v.iter().map(|c| c[1]).min().unwrap();
    v.iter().map(|c| [c[0] - mx, c[1] - my]).collect()
}

pub const ISOMETRIES: [[i64; 4]; 8] = [
    [1, 0, 0, 1],
    [0, -1, 1, 0],
    [-1, 0, 0, -1],
    [0, 1, -1, 0],
    [-1, 0, 0, 1],
    [1, 0, 0, -1],
    [0, 1, 1, 0],
    [0, -1, -1, 0],
];

pub fn congruent(a: &[Cell], b: &[Cell]) -> bool {
    let target = normalized(b.iter().copied());
    ISOMETRIES.iter().any(|m| {
        normalized(a.iter().map(|c| [m[0] * c[0] + m[1] * c[1], m[2] * c[0] + m[3] * c[1]])) == target
    })
}

pub fn connected(cells: &[Cell]) -> bool {
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([cells[0]]);
    seen.insert(cells[0]);
    while let Some(c) = queue.pop_front() {
        for d in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
            let n = [c[0] + d[0], c[1] + d[1]];
            if set.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == set.len()
}

/// Random connected polyomino grown cell by cell from the origin.
pub fn random_polyomino(rng: &mut impl Rng, n: usize) -> Vec<Cell> {
    let mut cells = vec![[0, 0]];
    let mut set: BTreeSet<Cell> = cells.iter().copied().collect();
    while cells.len() < n {
        let c = cells[rng.gen_range(0..cells.len())];
        let d = [[1, 0], [-1, 0], [0, 1], [0, -1]][rng.gen_range(0..4)];
        let next = [c[0] + d[0], c[1] + d[1]];
        if set.insert(next) {
            cells.push(next);
        }
    }
    cells.sort();
    cells
}

/// Random set of `n` distinct points in `[0, side)²`.
pub fn random_points(rng: &mut impl Rng, n: usize, side: i64) -> Vec<Cell> {
    let mut set = BTreeSet::new();
    while set.len() < n {
        set.insert([rng.gen_range(0..side), rng.gen_range(0..side)]);
    }
    set.into_iter().collect()
}

/// Overlap area of `P` and `P + v` by point sampling at resolution `1/res`.
pub fn raster_overlap(cells: &[Cell], v: [f64; 2], res: usize) -> f64 {
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    let h = 1.0 / res as f64;
    let mut hits = 0usize;
    for c in cells {
        for i in 0..res {
            for j in 0..res {
                let x = c[0] as f64 + (i as f64 + 0.5) * h - v[0];
                let y = c[1] as f64 + (j as f64 + 0.5) * h - v[1];
                if set.contains(&[x.floor() as i64, y.floor() as i64]) {
                    hits += 1;
                }
            }
        }
    }
    hits as f64 * h * h
}

/// Numbers `p + q√2` as integer pairs; exact ring arithmetic for oracles.
pub type Z2 = (i128, i128);

pub fn z2_mul(a: Z2, b: Z2) -> Z2 {
    (a.0 * b.0 + 2 * a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Determinant by cofactor expansion over `Z[√2]`.
pub fn z2_det(m: &[Vec<Z2>]) -> Z2 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = (0, 0);
    for j in 0..n {
        let minor: Vec<Vec<Z2>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
            .collect();
        let t = z2_mul(m[0][j], z2_det(&minor));
        if j % 2 == 0 {
            acc = (acc.0 + t.0, acc.1 + t.1);
        } else {
            acc = (acc.0 - t.0, acc.1 - t.1);
        }
    }
    acc
}

/// `√2 · B` for the octagonal basis, written out by hand: 1 ↦ √2 and
/// `±1/√2 ↦ ±1`.
pub fn sqrt2_basis() -> Vec<Vec<Z2>> {
    let r = (0, 1);
    let o = (1, 0);
    let m = (-1, 0);
    let z = (0, 0);
    vec![
        vec![r, o, z, m],
        vec![z, o, r, o],
        vec![r, m, z, o],
        vec![z, m, r, m],
    ]
}

/// Direct and internal coordinates of `B·n` as floats, computed from the
/// matrix entries.
pub fn embed_f64(n: [i64; 4]) -> ([f64; 2], [f64; 2]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let [a, b, c, d] = n.map(|x| x as f64);
    (
        [a + s * b - s * d, s * b + c + s * d],
        [a - s * b + s * d, -s * b + c - s * d],
    )
}
