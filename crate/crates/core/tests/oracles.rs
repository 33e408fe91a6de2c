//! Library results against small independent brute-force implementations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use specdir::group::{affine_group, affine_group_order};
use specdir::redei::{is_equidistributed_redei, orthogonality_level, ColumnCounts};
use specdir::search::{enumerate_orbits, ghidelli_minimal_k, verify_no_two_special};
use specdir::{ghidelli_bound, Direction, Point, PointSet, Prime};

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

// Directions as vectors (a, b); a point (x, y) lies on line c = b*x - a*y.
fn naive_special_count(p: u32, pts: &[(u32, u32)]) -> u32 {
    let mut dirs = vec![(0, 1)];
    dirs.extend((0..p).map(|m| (1, m)));
    dirs.iter()
        .filter(|&&(a, b)| {
            let mut counts = vec![0; p as usize];
            for &(x, y) in pts {
                counts[((b * x + (p - a) * y) % p) as usize] += 1;
            }
            counts.iter().any(|&c| c != counts[0])
        })
        .count() as u32
}

#[test]
fn special_count_histogram_matches_brute_force_at_3() {
    let mut expected: BTreeMap<u32, u64> = BTreeMap::new();
    for mask in 0u32..512 {
        let pts: Vec<(u32, u32)> = (0..9)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i % 3, i / 3))
            .collect();
        *expected.entry(naive_special_count(3, &pts)).or_default() += 1;
    }
    let report = verify_no_two_special(pr(3)).unwrap();
    assert_eq!(report.histogram, expected);
    assert!(!expected.contains_key(&2));
}

#[test]
fn redei_test_matches_line_sums_for_every_set_at_3() {
    let p = pr(3);
    for mask in 0u64..512 {
        let s = PointSet::from_mask(p, mask);
        if !s.len().is_multiple_of(3) {
            continue;
        }
        for m in 0..3 {
            assert_eq!(
                is_equidistributed_redei(&s, m).unwrap(),
                s.is_equidistributed(Direction::Slope(m)),
                "mask {mask} slope {m}"
            );
        }
    }
}

fn naive_orbit_count(p: u32, k: u32) -> usize {
    let q = pr(p);
    let perms: Vec<Vec<u32>> = affine_group(q).iter().map(|g| g.permutation()).collect();
    let n = p * p;
    let mut seen = HashSet::new();
    let mut orbits = 0;
    for mask in 0u64..1 << n {
        if mask.count_ones() != k || seen.contains(&mask) {
            continue;
        }
        orbits += 1;
        for perm in &perms {
            let image = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | 1 << perm[i as usize]);
            seen.insert(image);
        }
    }
    orbits
}

#[test]
fn orbit_counts_match_brute_force_at_3() {
    for k in 0..=9 {
        let got = enumerate_orbits(pr(3), k).unwrap().count();
        assert_eq!(got, naive_orbit_count(3, k), "k = {k}");
    }
}

#[test]
fn group_orders() {
    for p in [3u64, 5, 7] {
        let expected = p * p * (p * p - 1) * (p * p - p);
        assert_eq!(affine_group_order(pr(p as u32)), expected);
    }
    assert_eq!(affine_group(pr(3)).len(), 432);
}

#[test]
fn minimal_k_for_four_directions() {
    let got: Vec<u32> = [5, 7, 11, 13]
        .iter()
        .map(|&p| ghidelli_minimal_k(pr(p), 4).unwrap())
        .collect();
    assert_eq!(got, vec![1, 2, 3, 4]);
    assert_eq!(ghidelli_bound(pr(11), 3), 4);
    assert_eq!(ghidelli_bound(pr(13), 3), 5);
}

#[test]
fn orthogonality_level_matches_direct_moments() {
    for p in [5u32, 7, 11] {
        let q = pr(p);
        for seed in 0..200u64 {
            let w: Vec<u64> = (0..p as u64)
                .map(|j| (seed * 7 + j * j * 3 + seed * j) % 5)
                .collect();
            let moment = |l: u32| -> u64 {
                w.iter()
                    .enumerate()
                    .map(|(j, &wj)| wj * (j as u64).pow(l) % p as u64)
                    .sum::<u64>()
                    % p as u64
            };
            let expected = (1..p).take_while(|&l| moment(l) == 0).count() as u32;
            assert_eq!(
                orthogonality_level(&ColumnCounts::new(q, w).unwrap()),
                expected
            );
        }
    }
}

#[test]
fn special_directions_of_a_small_set() {
    let p = pr(5);
    let s = PointSet::from_points(
        p,
        [
            Point::new(0, 0),
            Point::new(1, 0),
            Point::new(2, 0),
            Point::new(3, 0),
            Point::new(4, 0),
        ],
    )
    .unwrap();
    assert_eq!(
        s.special_directions(),
        BTreeSet::from([Direction::HORIZONTAL])
    );
}
