//! Which special-direction counts occur among sets of size divisible by `p`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::anneal::{anneal, standard_targets, AnnealParams};
use super::kernel::{combination_chunks, group_permutations, LineMasks};
use super::orbits::enumerate_orbits_with;
use super::verify::mask_points;
use crate::constructions::{figure_fixture, triangle_set, TriangleVariant};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{line_points, Direction, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reachability {
    Achieved,
    /// Ruled out by an exhaustive scan.
    Absent,
    /// Neither found nor ruled out.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    /// Cardinality divided by `p`.
    pub k: u32,
    /// Number of special directions.
    pub d: u32,
    /// Number of equidistributed directions, `p + 1 - d`.
    pub equidistributed: u32,
    /// Sets with this `(k, d)`; exhaustive runs only.
    pub sets: Option<u64>,
    /// `AGL(2,p)`-orbits with this `(k, d)`; exhaustive runs only.
    pub orbits: Option<u64>,
    pub representative: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumSummary {
    pub d: u32,
    pub equidistributed: u32,
    pub status: Reachability,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub p: u32,
    pub exhaustive: bool,
    pub entries: Vec<SpectrumEntry>,
    pub summary: Vec<SpectrumSummary>,
}

impl SpectrumReport {
    pub fn status(&self, d: u32) -> Reachability {
        self.summary
            .iter()
            .find(|s| s.d == d)
            .map_or(Reachability::Unknown, |s| s.status)
    }

    /// Re-checks every representative against its claimed `(k, d)`.
    pub fn reverify(&self) -> bool {
        let p = Prime::new(self.p).unwrap();
        self.entries.iter().all(|e| {
            let s = PointSet::from_points(
                p,
                e.representative
                    .iter()
                    .map(|&i| crate::plane::Point::from_index(p, i as usize)),
            )
            .unwrap();
            s.len() as u32 == e.k * self.p && s.special_directions().len() as u32 == e.d
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumOptions {
    /// Random sets per cardinality (non-exhaustive runs).
    pub samples: u64,
    /// Annealing iterations per `(k, d)` target (non-exhaustive runs).
    pub anneal_iterations: u64,
    pub seed: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            samples: 2_000,
            anneal_iterations: 50_000,
            seed: 0,
        }
    }
}

fn summarize(p: u32, entries: &[SpectrumEntry], exhaustive: bool) -> Vec<SpectrumSummary> {
    let reached: BTreeSet<u32> = entries.iter().map(|e| e.d).collect();
    (0..=p + 1)
        .map(|d| SpectrumSummary {
            d,
            equidistributed: p + 1 - d,
            status: if reached.contains(&d) {
                Reachability::Achieved
            } else if exhaustive {
                Reachability::Absent
            } else {
                Reachability::Unknown
            },
        })
        .collect()
}

/// Exhaustive for `p` in `{3, 5}`; for `p = 7` built from constructions,
/// random sets and annealing.
pub fn gap_spectrum(p: Prime, options: &SpectrumOptions) -> Result<SpectrumReport> {
    match p.get() {
        3 | 5 => exhaustive_spectrum(p),
        7 => sampled_spectrum(p, options),
        q => Err(Error::CapExceeded {
            what: "gap spectrum",
            p: q,
            cap: 7,
        }),
    }
}

fn exhaustive_spectrum(p: Prime) -> Result<SpectrumReport> {
    let lm = LineMasks::new(p)?;
    let q = p.get();
    let perms = Arc::new(group_permutations(p));
    let strata: Vec<Result<Vec<SpectrumEntry>>> = (0..=q)
        .into_par_iter()
        .map(|k| {
            let sets: BTreeMap<u32, (u64, u64)> = combination_chunks(p.plane_size() as u32, k * q)
                .into_par_iter()
                .fold(
                    BTreeMap::new,
                    |mut acc: BTreeMap<u32, (u64, u64)>, chunk| {
                        for mask in chunk.iter() {
                            let e = acc.entry(lm.special_count(mask)).or_insert((0, u64::MAX));
                            e.0 += 1;
                            e.1 = e.1.min(mask);
                        }
                        acc
                    },
                )
                .reduce(BTreeMap::new, |mut a, b| {
                    for (d, (c, m)) in b {
                        let e = a.entry(d).or_insert((0, u64::MAX));
                        e.0 += c;
                        e.1 = e.1.min(m);
                    }
                    a
                });
            let mut orbits: BTreeMap<u32, u64> = BTreeMap::new();
            for rep in enumerate_orbits_with(p, k * q, perms.clone())? {
                *orbits.entry(lm.special_count(rep.mask)).or_default() += 1;
            }
            Ok(sets
                .into_iter()
                .map(|(d, (count, rep))| SpectrumEntry {
                    k,
                    d,
                    equidistributed: q + 1 - d,
                    sets: Some(count),
                    orbits: orbits.get(&d).copied(),
                    representative: mask_points(rep),
                })
                .collect())
        })
        .collect();
    let mut entries = Vec::new();
    for s in strata {
        entries.extend(s?);
    }
    Ok(SpectrumReport {
        p: q,
        exhaustive: true,
        summary: summarize(q, &entries, true),
        entries,
    })
}

fn sampled_spectrum(p: Prime, options: &SpectrumOptions) -> Result<SpectrumReport> {
    let q = p.get();
    let n = p.plane_size() as u32;
    let mut candidates: Vec<PointSet> = vec![PointSet::empty(p), PointSet::full(p)];
    for k in 1..q {
        candidates.push((0..k).fold(PointSet::empty(p), |acc, c| {
            acc.union(&line_points(p, Direction::Vertical, c))
        }));
    }
    for v in [TriangleVariant::Lower, TriangleVariant::Upper] {
        let t = triangle_set(p, v);
        candidates.push(t.complement());
        candidates.push(t);
    }
    if let Ok(f) = figure_fixture(q) {
        if let Some(s) = f.grid.to_point_set() {
            candidates.push(s.complement());
            candidates.push(s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for k in 1..q {
        for _ in 0..options.samples {
            let idx = sample(&mut rng, n as usize, (k * q) as usize);
            let mut s = PointSet::empty(p);
            for i in idx.iter() {
                s.insert_index(i);
            }
            candidates.push(s);
        }
    }
    let targets: Vec<(u32, u32)> = (1..q).flat_map(|k| (2..=q).map(move |d| (k, d))).collect();
    let annealed: Vec<Result<Option<PointSet>>> = targets
        .par_iter()
        .map(|&(k, d)| {
            let target = standard_targets(p, d)?;
            let seed = options.seed ^ ((k as u64) << 32 | d as u64);
            let out = anneal(
                p,
                k * q,
                &target,
                &AnnealParams::with_budget(options.anneal_iterations, seed),
            )?;
            Ok(out.witness.map(|w| {
                let mut s = PointSet::empty(p);
                for i in w {
                    s.insert_index(i as usize);
                }
                s
            }))
        })
        .collect();
    for a in annealed {
        candidates.extend(a?);
    }
    let mut best: BTreeMap<(u32, u32), PointSet> = BTreeMap::new();
    for s in candidates {
        let k = s.len() as u32 / q;
        let d = s.special_directions().len() as u32;
        let slot = best.entry((k, d)).or_insert_with(|| s.clone());
        if s.lex_cmp(slot).is_lt() {
            *slot = s;
        }
    }
    let entries: Vec<SpectrumEntry> = best
        .into_iter()
        .map(|((k, d), s)| SpectrumEntry {
            k,
            d,
            equidistributed: q + 1 - d,
            sets: None,
            orbits: None,
            representative: s.indices().map(|i| i as u32).collect(),
        })
        .collect();
    Ok(SpectrumReport {
        p: q,
        exhaustive: false,
        summary: summarize(q, &entries, false),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_spectrum() {
        let r = gap_spectrum(Prime::new(3).unwrap(), &SpectrumOptions::default()).unwrap();
        assert!(r.reverify());
        assert_eq!(r.status(2), Reachability::Absent);
        assert_eq!(r.status(0), Reachability::Achieved);
        assert_eq!(r.status(1), Reachability::Achieved);
        let total: u64 = r.entries.iter().map(|e| e.sets.unwrap()).sum();
        assert_eq!(total, 1 + 84 + 84 + 1);
    }
}
