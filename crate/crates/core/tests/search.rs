//! Exhaustive homometric searches against brute-force oracles.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use aperimet::error::Error;
use aperimet::homometry::{
    difference_multiset_1d, enumerate_fixed_polyominoes, is_minkowski_decomposable,
    reconstruct_octagonal_pair, search_1d_pairs, search_polyomino_pairs,
    search_polyomino_pairs_filtered, FIXED_POLYOMINO_COUNTS, PAIR_CELLS, PAIR_FACTOR_SIZES,
    PAIR_SEARCH_BOX,
};
use aperimet::window::Cell;

fn normalize(cells: &BTreeSet<Cell>) -> Vec<Cell> {
    let mx = cells.iter().map(|c| c[0]).min().unwrap();
    let my = cells.iter().map(|c| c[1]).min().unwrap();
    cells.iter().map(|c| [c[0] - mx, c[1] - my]).collect()
}

/// All fixed polyominoes of size `n`, grown one cell at a time.
fn grow(n: usize) -> BTreeSet<Vec<Cell>> {
    let mut level: BTreeSet<Vec<Cell>> = [vec![[0, 0]]].into();
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for p in &level {
            let set: BTreeSet<Cell> = p.iter().copied().collect();
            for c in p {
                for d in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
                    let q = [c[0] + d[0], c[1] + d[1]];
                    if !set.contains(&q) {
                        let mut bigger = set.clone();
                        bigger.insert(q);
                        next.insert(normalize(&bigger));
                    }
                }
            }
        }
        level = next;
    }
    level
}

fn free_key(cells: &[Cell]) -> Vec<Cell> {
    common::ISOMETRIES
        .iter()
        .map(|m| {
            let set: BTreeSet<Cell> = cells
                .iter()
                .map(|c| [m[0] * c[0] + m[1] * c[1], m[2] * c[0] + m[3] * c[1]])
                .collect();
            normalize(&set)
        })
        .min()
        .unwrap()
}

/// Unordered pairs of free classes with equal difference counts.
fn oracle_pairs(n: usize, w: i64, h: i64) -> BTreeSet<(Vec<Cell>, Vec<Cell>)> {
    let mut groups: BTreeMap<BTreeMap<Cell, u64>, BTreeSet<Vec<Cell>>> = BTreeMap::new();
    for p in grow(n) {
        if p.iter().all(|c| c[0] < w && c[1] < h) {
            groups.entry(common::difference_counts(&p)).or_default().insert(free_key(&p));
        }
    }
    let mut out = BTreeSet::new();
    for classes in groups.values() {
        let v: Vec<_> = classes.iter().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                out.insert((v[i].clone(), v[j].clone()));
            }
        }
    }
    out
}

fn library_pairs(n: usize, w: i64, h: i64) -> BTreeSet<(Vec<Cell>, Vec<Cell>)> {
    search_polyomino_pairs(n, w, h)
        .unwrap()
        .into_iter()
        .map(|r| {
            assert!(!r.congruent);
            assert_eq!(
                common::difference_counts(r.left.cells()),
                common::difference_counts(r.right.cells())
            );
            assert!(!common::congruent(r.left.cells(), r.right.cells()));
            let (a, b) = (free_key(r.left.cells()), free_key(r.right.cells()));
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

#[test]
fn fixed_enumeration_matches_growth_oracle() {
    for n in 1..=7 {
        let ours = enumerate_fixed_polyominoes(n, n as i64, n as i64).unwrap();
        let ours: BTreeSet<Vec<Cell>> = ours.into_iter().map(|p| normalize(&p.into_iter().collect())).collect();
        assert_eq!(ours, grow(n), "n = {n}");
        assert_eq!(ours.len() as u128, FIXED_POLYOMINO_COUNTS[n - 1]);
    }
}

#[test]
fn tetrominoes_are_determined_by_their_covariogram() {
    assert!(search_polyomino_pairs(4, 4, 4).unwrap().is_empty());
    assert!(search_polyomino_pairs(1, 1, 1).unwrap().is_empty());
}

#[test]
fn small_searches_match_oracle() {
    for (n, w, h) in [(6, 6, 6), (8, 4, 5), (9, 9, 9)] {
        let oracle = oracle_pairs(n, w, h);
        assert_eq!(library_pairs(n, w, h), oracle, "n = {n}");
        if n == 9 {
            assert_eq!(oracle.len(), 7);
        }
    }
}

#[test]
fn reconstructed_pair_is_found_by_search() {
    let known = reconstruct_octagonal_pair().unwrap();
    let [w, h] = PAIR_SEARCH_BOX;
    let found = search_polyomino_pairs_filtered(PAIR_CELLS, w, h, |c| {
        is_minkowski_decomposable(c, PAIR_FACTOR_SIZES)
    })
    .unwrap();
    let hit = found.iter().any(|r| {
        (r.left.congruent(&known.report.left) && r.right.congruent(&known.report.right))
            || (r.left.congruent(&known.report.right) && r.right.congruent(&known.report.left))
    });
    assert!(hit, "{} pairs, none congruent to the reconstruction", found.len());
}

#[test]
fn budget_is_enforced() {
    assert!(matches!(
        search_polyomino_pairs(16, 16, 16),
        Err(Error::BudgetExceeded { .. })
    ));
    assert!(matches!(search_1d_pairs(40, 200), Err(Error::BudgetExceeded { .. })));
}

fn subsets(m: i64, n: usize) -> Vec<Vec<i64>> {
    // Subsets of 0..=m that contain both 0 and m.
    let mut out = Vec::new();
    for mask in 0u64..(1 << (m - 1)) {
        if mask.count_ones() as usize + 2 == n {
            let mut s = vec![0];
            s.extend((1..m).filter(|i| mask >> (i - 1) & 1 == 1));
            s.push(m);
            out.push(s);
        }
    }
    out
}

#[test]
fn line_search_matches_oracle() {
    for (n, m) in [(5, 9), (6, 11), (6, 13)] {
        let mut oracle = BTreeSet::new();
        let mut by_diff: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
        for s in subsets(m, n) {
            by_diff.entry(difference_multiset_1d(&s)).or_default().push(s);
        }
        for group in by_diff.values() {
            for i in 0..group.len() {
                for j in i + 1..group.len() {
                    let (a, b) = (&group[i], &group[j]);
                    let span = a[a.len() - 1];
                    let mirror: Vec<i64> = a.iter().rev().map(|x| span - x).collect();
                    if &mirror != b {
                        oracle.insert((a.clone().min(b.clone()), a.clone().max(b.clone())));
                    }
                }
            }
        }
        let ours: BTreeSet<_> = search_1d_pairs(n, m)
            .unwrap()
            .into_iter()
            .map(|(a, b)| (a.clone().min(b.clone()), a.max(b)))
            .collect();
        assert_eq!(ours, oracle, "n = {n}, m = {m}");
        if (n, m) == (6, 11) {
            assert_eq!(ours.len(), 4);
        }
    }
}
