//! Simulated annealing for sets with a prescribed set of special directions.
//!
//! The state is a set of fixed cardinality `n`. Its cost is the sum, over the
//! directions that should be equidistributed, of `p * sum(c^2) - n^2` where
//! `c` runs over the line counts, plus a fixed penalty for every target
//! direction that is equidistributed. The cost is zero exactly on sets whose
//! special directions are the targets. Moves swap a point in with a point out.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{Direction, Point, PointSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnealParams {
    /// Iterations per restart.
    pub iterations: u64,
    pub restarts: u32,
    pub seed: u64,
    pub start_temperature: f64,
    pub end_temperature: f64,
}

impl AnnealParams {
    /// Splits `budget` total iterations over a few restarts.
    pub fn with_budget(budget: u64, seed: u64) -> Self {
        let restarts = if budget >= 400_000 { 8 } else { 1 };
        AnnealParams {
            iterations: budget / restarts as u64,
            restarts,
            seed,
            start_temperature: 4.0,
            end_temperature: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnealOutcome {
    pub witness: Option<Vec<u32>>,
    /// Lowest cost reached by any restart.
    pub best_cost: u64,
    pub restart: Option<u32>,
}

struct State {
    p: usize,
    n: i64,
    /// Per direction: line index of every point.
    line_of: Vec<Vec<u16>>,
    counts: Vec<Vec<i64>>,
    sq: Vec<i64>,
    target: Vec<bool>,
    penalty: i64,
    member: Vec<bool>,
    inside: Vec<usize>,
    outside: Vec<usize>,
}

impl State {
    fn new(p: Prime, target: &BTreeSet<Direction>, points: Vec<usize>) -> Self {
        let q = p.get() as usize;
        let dirs: Vec<Direction> = Direction::all(p).collect();
        let line_of: Vec<Vec<u16>> = dirs
            .iter()
            .map(|&d| {
                (0..q * q)
                    .map(|i| d.line_index(p, Point::from_index(p, i)) as u16)
                    .collect()
            })
            .collect();
        let mut member = vec![false; q * q];
        for &i in &points {
            member[i] = true;
        }
        let mut counts = vec![vec![0i64; q]; q + 1];
        for (d, lines) in line_of.iter().enumerate() {
            for &i in &points {
                counts[d][lines[i] as usize] += 1;
            }
        }
        let sq = counts
            .iter()
            .map(|c| c.iter().map(|x| x * x).sum())
            .collect();
        let outside = (0..q * q).filter(|&i| !member[i]).collect();
        State {
            p: q,
            n: points.len() as i64,
            line_of,
            counts,
            sq,
            target: dirs.iter().map(|d| target.contains(d)).collect(),
            penalty: 2 * q as i64,
            member,
            inside: points,
            outside,
        }
    }

    fn direction_cost(&self, d: usize, sq: i64) -> i64 {
        let spread = self.p as i64 * sq - self.n * self.n;
        if self.target[d] {
            if spread == 0 {
                self.penalty
            } else {
                0
            }
        } else {
            spread
        }
    }

    fn cost(&self) -> i64 {
        (0..=self.p)
            .map(|d| self.direction_cost(d, self.sq[d]))
            .sum()
    }

    /// Cost change and new square sums of swapping `out` for `inp`.
    fn delta(&self, out: usize, inp: usize, new_sq: &mut [i64]) -> i64 {
        let mut delta = 0;
        for d in 0..=self.p {
            let a = self.line_of[d][out] as usize;
            let b = self.line_of[d][inp] as usize;
            let s = if a == b {
                self.sq[d]
            } else {
                let ca = self.counts[d][a];
                let cb = self.counts[d][b];
                self.sq[d] - 2 * ca + 1 + 2 * cb + 1
            };
            new_sq[d] = s;
            delta += self.direction_cost(d, s) - self.direction_cost(d, self.sq[d]);
        }
        delta
    }

    fn apply(&mut self, oi: usize, ii: usize, new_sq: &[i64]) {
        let out = self.inside[oi];
        let inp = self.outside[ii];
        for d in 0..=self.p {
            self.counts[d][self.line_of[d][out] as usize] -= 1;
            self.counts[d][self.line_of[d][inp] as usize] += 1;
        }
        self.sq.copy_from_slice(new_sq);
        self.member[out] = false;
        self.member[inp] = true;
        self.inside[oi] = inp;
        self.outside[ii] = out;
    }
}

fn run_restart(
    p: Prime,
    cardinality: usize,
    target: &BTreeSet<Direction>,
    params: &AnnealParams,
    restart: u32,
) -> (i64, Option<Vec<u32>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(restart as u64);
    let total = p.plane_size();
    let start = rand::seq::index::sample(&mut rng, total, cardinality).into_vec();
    let mut st = State::new(p, target, start);
    let mut cost = st.cost();
    let mut best = cost;
    let mut new_sq = vec![0i64; p.get() as usize + 1];
    let steps = params.iterations.max(1);
    let ratio = params.end_temperature / params.start_temperature;
    for it in 0..steps {
        if cost == 0 {
            break;
        }
        if st.inside.is_empty() || st.outside.is_empty() {
            break;
        }
        let temp = params.start_temperature * ratio.powf(it as f64 / steps as f64);
        let oi = rng.gen_range(0..st.inside.len());
        let ii = rng.gen_range(0..st.outside.len());
        let delta = st.delta(st.inside[oi], st.outside[ii], &mut new_sq);
        let accept =
            delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / (temp * p.get() as f64)).exp();
        if accept {
            st.apply(oi, ii, &new_sq);
            cost += delta;
            best = best.min(cost);
        }
    }
    let witness = (cost == 0).then(|| {
        let mut pts: Vec<u32> = st.inside.iter().map(|&i| i as u32).collect();
        pts.sort_unstable();
        pts
    });
    (best, witness)
}

/// Searches for a `cardinality`-set whose special directions are exactly
/// `target`. Restarts run in parallel; the reported witness is the one of
/// the lowest-numbered successful restart, so the result does not depend on
/// the worker count.
pub fn anneal(
    p: Prime,
    cardinality: u32,
    target: &BTreeSet<Direction>,
    params: &AnnealParams,
) -> Result<AnnealOutcome> {
    if !cardinality.is_multiple_of(p.get())
        || cardinality == 0
        || cardinality >= p.plane_size() as u32
    {
        return Err(Error::invalid(format!(
            "cardinality {cardinality} must be a proper nonzero multiple of {p}",
            p = p.get()
        )));
    }
    let runs: Vec<(i64, Option<Vec<u32>>)> = (0..params.restarts)
        .into_par_iter()
        .map(|r| run_restart(p, cardinality as usize, target, params, r))
        .collect();
    let best_cost = runs.iter().map(|r| r.0).min().unwrap_or(i64::MAX).max(0) as u64;
    let hit = runs.iter().position(|r| r.1.is_some());
    let witness = hit.and_then(|i| runs[i].1.clone());
    if let Some(w) = &witness {
        let s = PointSet::from_points(p, w.iter().map(|&i| Point::from_index(p, i as usize)))?;
        assert_eq!(
            &s.special_directions(),
            target,
            "annealing witness failed re-verification"
        );
    }
    Ok(AnnealOutcome {
        witness,
        best_cost,
        restart: hit.map(|i| i as u32),
    })
}

/// The first `d` directions of `(1,0), (0,1), (1,1), (1,-1), (1,2), (1,3), ...`.
pub fn standard_targets(p: Prime, d: u32) -> Result<BTreeSet<Direction>> {
    let q = p.get();
    if d > q + 1 {
        return Err(Error::invalid(format!(
            "at most {} directions exist",
            q + 1
        )));
    }
    let mut order = vec![
        Direction::HORIZONTAL,
        Direction::Vertical,
        Direction::Slope(1),
        Direction::Slope(q - 1),
    ];
    order.extend((2..q - 1).map(Direction::Slope));
    order.dedup();
    let mut seen = BTreeSet::new();
    Ok(order
        .into_iter()
        .filter(|d| seen.insert(*d))
        .take(d as usize)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_plus_shape_at_p5() {
        let p = Prime::new(5).unwrap();
        let target = standard_targets(p, 4).unwrap();
        let params = AnnealParams::with_budget(200_000, 7);
        let out = anneal(p, 5, &target, &params).unwrap();
        assert!(out.witness.is_some(), "{out:?}");
        assert_eq!(out.best_cost, 0);
    }

    #[test]
    fn deterministic() {
        let p = Prime::new(7).unwrap();
        let target = standard_targets(p, 4).unwrap();
        let params = AnnealParams::with_budget(20_000, 3);
        assert_eq!(
            anneal(p, 14, &target, &params).unwrap(),
            anneal(p, 14, &target, &params).unwrap()
        );
    }

    #[test]
    fn targets() {
        let p = Prime::new(3).unwrap();
        assert_eq!(standard_targets(p, 4).unwrap().len(), 4);
        assert!(standard_targets(p, 5).is_err());
        let p = Prime::new(7).unwrap();
        assert_eq!(standard_targets(p, 8).unwrap().len(), 8);
    }
}
