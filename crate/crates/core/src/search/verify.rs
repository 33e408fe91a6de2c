//! Exhaustive checks of the structural statements about special directions.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{binomial, combination_chunks, group_permutations, orbit_of, LineMasks};
use crate::constructions::{triangle_set, TriangleVariant};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{Direction, PointSet};
use crate::redei::is_equidistributed_redei;

/// Point indices of a mask, ascending.
pub fn mask_points(mask: u64) -> Vec<u32> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn cap(what: &'static str, p: Prime, allowed: &[u32]) -> Result<()> {
    if allowed.contains(&p.get()) {
        Ok(())
    } else {
        Err(Error::CapExceeded {
            what,
            p: p.get(),
            cap: *allowed.iter().max().unwrap(),
        })
    }
}

const MAX_COUNTEREXAMPLES: usize = 16;

#[derive(Clone, Debug, Default)]
struct Histogram {
    counts: BTreeMap<u32, u64>,
    bad: Vec<u64>,
}

impl Histogram {
    fn merge(mut self, other: Histogram) -> Histogram {
        for (d, c) in other.counts {
            *self.counts.entry(d).or_default() += c;
        }
        self.bad.extend(other.bad);
        self.bad.sort_unstable();
        self.bad.truncate(MAX_COUNTEREXAMPLES);
        self
    }

    fn record(mut self, d: u32, mask: u64, bad: bool) -> Histogram {
        *self.counts.entry(d).or_default() += 1;
        if bad && self.bad.len() < MAX_COUNTEREXAMPLES {
            self.bad.push(mask);
        }
        self
    }
}

fn scan_all(lm: &LineMasks, bad: impl Fn(u64, u32) -> bool + Sync) -> Histogram {
    let n = lm.prime().plane_size() as u32;
    (0u32..1 << n)
        .into_par_iter()
        .with_min_len(1 << 12)
        .fold(Histogram::default, |h, mask| {
            let mask = mask as u64;
            let d = lm.special_count(mask);
            h.record(d, mask, bad(mask, d))
        })
        .reduce(Histogram::default, Histogram::merge)
}

fn scan_stratum(lm: &LineMasks, k: u32, bad: impl Fn(u64, u32) -> bool + Sync) -> Histogram {
    let n = lm.prime().plane_size() as u32;
    combination_chunks(n, k)
        .into_par_iter()
        .fold(Histogram::default, |h, chunk| {
            chunk.iter().fold(h, |h, mask| {
                let d = lm.special_count(mask);
                h.record(d, mask, bad(mask, d))
            })
        })
        .reduce(Histogram::default, Histogram::merge)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoTwoReport {
    pub p: u32,
    /// Whether every subset of the plane was scanned.
    pub exhaustive: bool,
    /// Cardinalities that were scanned.
    pub strata: Vec<u32>,
    pub sets_scanned: u64,
    /// Special-direction count to number of scanned sets.
    pub histogram: BTreeMap<u32, u64>,
    /// Unions of parallel lines among the scanned cardinalities.
    pub expected_one_special: u64,
    pub counterexamples: Vec<Vec<u32>>,
}

impl NoTwoReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
            && self.histogram.get(&1).copied().unwrap_or(0) == self.expected_one_special
    }
}

/// Looks for sets with exactly two special directions.
///
/// `p` in `{3, 5}` scans the whole power set. `p = 7` scans the cardinalities
/// `0, 7, 42, 49`; every other cardinality not divisible by 7 has all
/// directions special.
pub fn verify_no_two_special(p: Prime) -> Result<NoTwoReport> {
    cap("no-two-special scan", p, &[3, 5, 7])?;
    let lm = LineMasks::new(p)?;
    let q = p.get();
    let n = p.plane_size() as u32;
    let bad = |_: u64, d: u32| d == 2;
    let (strata, hist): (Vec<u32>, Histogram) = if q <= 5 {
        ((0..=n).collect(), scan_all(&lm, bad))
    } else {
        let strata = vec![0, q, n - q, n];
        let h = strata
            .iter()
            .map(|&k| scan_stratum(&lm, k, bad))
            .fold(Histogram::default(), Histogram::merge);
        (strata, h)
    };
    let expected_one_special = strata
        .iter()
        .filter(|&&k| k % q == 0 && k > 0 && k < n)
        .map(|&k| (q as u64 + 1) * binomial(q as u64, (k / q) as u64))
        .sum();
    Ok(NoTwoReport {
        p: q,
        exhaustive: q <= 5,
        sets_scanned: hist.counts.values().sum(),
        strata,
        histogram: hist.counts,
        expected_one_special,
        counterexamples: hist.bad.into_iter().map(mask_points).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessStratum {
    pub cardinality: u32,
    pub three_special: u64,
    pub in_triangle_orbit: u64,
    pub in_complement_orbit: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub p: u32,
    pub triangle_orbit_size: u64,
    pub complement_orbit_size: u64,
    pub strata: Vec<UniquenessStratum>,
    pub counterexamples: Vec<Vec<u32>>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        let small = self.p * (self.p - 1) / 2;
        let large = self.p * (self.p + 1) / 2;
        self.counterexamples.is_empty()
            && self.strata.iter().all(|s| {
                if s.cardinality == small {
                    s.three_special > 0 && s.three_special == s.in_triangle_orbit
                } else if s.cardinality == large {
                    s.three_special > 0 && s.three_special == s.in_complement_orbit
                } else {
                    s.three_special == 0
                }
            })
    }
}

/// Classifies every set with three special directions and cardinality
/// divisible by `p` up to `AGL(2,p)`, for `p` in `{3, 5}`.
pub fn verify_three_special_uniqueness(p: Prime) -> Result<UniquenessReport> {
    cap("uniqueness scan", p, &[3, 5])?;
    let lm = LineMasks::new(p)?;
    let perms = group_permutations(p);
    let tri = triangle_set(p, TriangleVariant::Lower).to_mask().unwrap();
    let tri_orbit: HashSet<u64> = orbit_of(&perms, tri).into_iter().collect();
    let comp_orbit: HashSet<u64> = orbit_of(&perms, !tri & lm.full()).into_iter().collect();
    let q = p.get();
    let mut strata = Vec::new();
    let mut counterexamples = Vec::new();
    for k in (0..=q).map(|k| k * q) {
        let (st, bad) = combination_chunks(p.plane_size() as u32, k)
            .into_par_iter()
            .map(|chunk| {
                let mut st = (0u64, 0u64, 0u64);
                let mut bad = Vec::new();
                for mask in chunk.iter() {
                    if lm.special_count(mask) != 3 {
                        continue;
                    }
                    st.0 += 1;
                    let in_tri = tri_orbit.contains(&mask);
                    let in_comp = comp_orbit.contains(&mask);
                    st.1 += in_tri as u64;
                    st.2 += in_comp as u64;
                    if !in_tri && !in_comp {
                        bad.push(mask);
                    }
                }
                (st, bad)
            })
            .reduce(
                || ((0, 0, 0), Vec::new()),
                |(a, mut ba), (b, bb)| {
                    ba.extend(bb);
                    ((a.0 + b.0, a.1 + b.1, a.2 + b.2), ba)
                },
            );
        let mut bad = bad;
        bad.sort_unstable();
        counterexamples.extend(bad.into_iter().take(MAX_COUNTEREXAMPLES).map(mask_points));
        strata.push(UniquenessStratum {
            cardinality: k,
            three_special: st.0,
            in_triangle_orbit: st.1,
            in_complement_orbit: st.2,
        });
    }
    Ok(UniquenessReport {
        p: q,
        triangle_orbit_size: tri_orbit.len() as u64,
        complement_orbit_size: comp_orbit.len() as u64,
        strata,
        counterexamples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionLinesStratum {
    pub k: u32,
    pub sets: u64,
    /// Sets equidistributed in at least `p - 1` directions.
    pub nearly_equidistributed: u64,
    pub unions_of_lines: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionLinesReport {
    pub p: u32,
    pub strata: Vec<UnionLinesStratum>,
    pub counterexamples: Vec<Vec<u32>>,
}

impl UnionLinesReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// For `p` in `{3, 5}` and every `kp`-set: equidistributed in at least `p-1`
/// directions iff a union of `k` parallel lines (`1 <= k <= p-1`), in which
/// case exactly one direction is special.
pub fn verify_union_lines_iff(p: Prime) -> Result<UnionLinesReport> {
    cap("union-of-lines scan", p, &[3, 5])?;
    let lm = LineMasks::new(p)?;
    let unions: HashSet<u64> = lm.line_unions().into_iter().collect();
    let q = p.get();
    let mut strata = Vec::new();
    let mut counterexamples = Vec::new();
    for k in 0..=q {
        let trivial = k == 0 || k == q;
        let (counts, mut bad) = combination_chunks(p.plane_size() as u32, k * q)
            .into_par_iter()
            .map(|chunk| {
                let mut c = (0u64, 0u64, 0u64);
                let mut bad = Vec::new();
                for mask in chunk.iter() {
                    let d = lm.special_count(mask);
                    let near = d <= 2;
                    let union = unions.contains(&mask);
                    c.0 += 1;
                    c.1 += near as u64;
                    c.2 += union as u64;
                    let ok = if trivial {
                        d == 0
                    } else {
                        near == union && (!union || d == 1)
                    };
                    if !ok {
                        bad.push(mask);
                    }
                }
                (c, bad)
            })
            .reduce(
                || ((0, 0, 0), Vec::new()),
                |(a, mut ba), (b, bb)| {
                    ba.extend(bb);
                    ((a.0 + b.0, a.1 + b.1, a.2 + b.2), ba)
                },
            );
        bad.sort_unstable();
        counterexamples.extend(bad.into_iter().take(MAX_COUNTEREXAMPLES).map(mask_points));
        strata.push(UnionLinesStratum {
            k,
            sets: counts.0,
            nearly_equidistributed: counts.1,
            unions_of_lines: counts.2,
        });
    }
    Ok(UnionLinesReport {
        p: q,
        strata,
        counterexamples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedeiDisagreement {
    pub points: Vec<u32>,
    pub slope: u32,
    pub redei: bool,
    pub profile: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedeiCrosscheckReport {
    pub p: u32,
    pub exhaustive: bool,
    pub sets_checked: u64,
    pub disagreements: Vec<RedeiDisagreement>,
}

impl RedeiCrosscheckReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn redei_disagreements(s: &PointSet) -> Vec<RedeiDisagreement> {
    let p = s.prime();
    (0..p.get())
        .filter_map(|m| {
            let redei = is_equidistributed_redei(s, m).expect("cardinality divisible by p");
            let profile = s.is_equidistributed(Direction::Slope(m));
            (redei != profile).then(|| RedeiDisagreement {
                points: s.indices().map(|i| i as u32).collect(),
                slope: m,
                redei,
                profile,
            })
        })
        .collect()
}

/// Compares the Rédei criterion with direct line sums on every slope
/// direction. With `samples = None` all sets of cardinality divisible by `p`
/// are checked (`p <= 5`); otherwise `samples` random ones drawn from `seed`.
pub fn redei_crosscheck(
    p: Prime,
    samples: Option<u64>,
    seed: u64,
) -> Result<RedeiCrosscheckReport> {
    let q = p.get();
    let sets: Vec<PointSet> = match samples {
        None => {
            cap("exhaustive Rédei cross-check", p, &[3, 5])?;
            let n = p.plane_size() as u32;
            let mut all = Vec::new();
            for k in 0..=q {
                all.extend(
                    super::kernel::combinations(n, k * q).map(|m| PointSet::from_mask(p, m)),
                );
            }
            all
        }
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = p.plane_size();
            (0..count)
                .map(|_| {
                    let k = rng.gen_range(0..=q) as usize;
                    let idx = sample(&mut rng, n, k * q as usize);
                    let mut s = PointSet::empty(p);
                    for i in idx.iter() {
                        s.insert_index(i);
                    }
                    s
                })
                .collect()
        }
    };
    let mut disagreements: Vec<RedeiDisagreement> =
        sets.par_iter().flat_map_iter(redei_disagreements).collect();
    disagreements.truncate(MAX_COUNTEREXAMPLES);
    Ok(RedeiCrosscheckReport {
        p: q,
        exhaustive: samples.is_none(),
        sets_checked: sets.len() as u64,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_two_special_p3() {
        let r = verify_no_two_special(Prime::new(3).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.sets_scanned, 512);
        assert_eq!(r.expected_one_special, 24);
        assert!(!r.histogram.contains_key(&2));
    }

    #[test]
    fn uniqueness_p3() {
        let r = verify_three_special_uniqueness(Prime::new(3).unwrap()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn union_lines_p3() {
        assert!(verify_union_lines_iff(Prime::new(3).unwrap())
            .unwrap()
            .passed());
    }

    #[test]
    fn redei_p3() {
        let r = redei_crosscheck(Prime::new(3).unwrap(), None, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.sets_checked, 1 + 84 + 84 + 1);
    }

    #[test]
    fn caps() {
        let p7 = Prime::new(7).unwrap();
        assert!(matches!(
            verify_three_special_uniqueness(p7),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            verify_union_lines_iff(p7),
            Err(Error::CapExceeded { .. })
        ));
    }
}
