//! Smallest-cardinality probes for sets with a given number of special
//! directions.

use rayon::prelude::*;
use serde::Serialize;

use super::anneal::{anneal, standard_targets, AnnealParams};
use super::kernel::{combination_chunks, LineMasks};
use super::verify::mask_points;
use crate::constructions::pipeline::{
    four_direction_search, FourDirectionOutcome, ParamMenu, PipelineParams,
};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{ghidelli_bound, Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMethod {
    Exhaustive,
    Pipeline,
    Anneal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeStatus {
    Found,
    /// An exhaustive scan found nothing.
    NoneExists,
    NoneWithinBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub p: u32,
    pub special: u32,
    pub k: u32,
    pub cardinality: u32,
    pub status: ProbeStatus,
    pub method: Option<ProbeMethod>,
    pub witness: Option<Vec<u32>>,
}

/// Smallest `k >= 1` with `ghidelli_bound(p, k) <= d`.
pub fn ghidelli_minimal_k(p: Prime, d: u32) -> Option<u32> {
    (1..p.get()).find(|&k| ghidelli_bound(p, k) <= d)
}

/// Exactly-`d`-special sets of the given size, smallest mask first
/// (`p <= 5`).
pub fn exhaustive_witness(p: Prime, cardinality: u32, d: u32) -> Result<Option<u64>> {
    if p.get() > 5 {
        return Err(Error::CapExceeded {
            what: "exhaustive witness scan",
            p: p.get(),
            cap: 5,
        });
    }
    let lm = LineMasks::new(p)?;
    Ok(combination_chunks(p.plane_size() as u32, cardinality)
        .into_par_iter()
        .filter_map(|c| c.iter().find(|&m| lm.special_count(m) == d))
        .min())
}

/// Looks for a set of cardinality `k*p` at the smallest `k` the Ghidelli
/// bound allows, with exactly `d` special directions. `budget` bounds the
/// pipeline menu and the annealing iterations.
pub fn min_cardinality_probe(p: Prime, d: u32, budget: u64, seed: u64) -> Result<ProbeReport> {
    let k = ghidelli_minimal_k(p, d)
        .ok_or_else(|| Error::invalid(format!("no k < p reaches {d} special directions")))?;
    probe_cardinality(p, k * p.get(), d, budget, seed)
}

/// As [`min_cardinality_probe`] for an explicit cardinality.
pub fn probe_cardinality(
    p: Prime,
    cardinality: u32,
    d: u32,
    budget: u64,
    seed: u64,
) -> Result<ProbeReport> {
    let q = p.get();
    if !cardinality.is_multiple_of(q) || cardinality == 0 || cardinality >= p.plane_size() as u32 {
        return Err(Error::invalid(format!(
            "cardinality {cardinality} must be a proper multiple of {q}"
        )));
    }
    let mut report = ProbeReport {
        p: q,
        special: d,
        k: cardinality / q,
        cardinality,
        status: ProbeStatus::NoneWithinBudget,
        method: None,
        witness: None,
    };
    if q <= 5 {
        report.method = Some(ProbeMethod::Exhaustive);
        match exhaustive_witness(p, cardinality, d)? {
            Some(m) => {
                report.status = ProbeStatus::Found;
                report.witness = Some(mask_points(m));
            }
            None => report.status = ProbeStatus::NoneExists,
        }
        return Ok(report);
    }
    let targets = standard_targets(p, d)?;
    if d == 4 {
        let mut menu = if q == 11 {
            vec![PipelineParams::figure_p11()]
        } else {
            Vec::new()
        };
        menu.extend(
            ParamMenu::Sweep {
                max_correction_pairs: 1,
            }
            .expand(p),
        );
        let outcome = four_direction_search(p, &ParamMenu::Fixed(menu), false, budget as usize)?;
        if let FourDirectionOutcome::Found(out) = outcome {
            let s = out.grid.to_point_set().expect("{0,1} output");
            if s.len() as u32 == cardinality {
                report.status = ProbeStatus::Found;
                report.method = Some(ProbeMethod::Pipeline);
                report.witness = Some(s.indices().map(|i| i as u32).collect());
                return Ok(report);
            }
        }
    }
    let out = anneal(
        p,
        cardinality,
        &targets,
        &AnnealParams::with_budget(budget, seed),
    )?;
    report.method = Some(ProbeMethod::Anneal);
    if let Some(w) = out.witness {
        report.status = ProbeStatus::Found;
        report.witness = Some(w);
    }
    Ok(report)
}

impl ProbeReport {
    pub fn witness_set(&self) -> Option<PointSet> {
        let p = Prime::new(self.p).ok()?;
        let w = self.witness.as_ref()?;
        PointSet::from_points(p, w.iter().map(|&i| Point::from_index(p, i as usize))).ok()
    }

    /// The witness, if any, has the claimed size and special count.
    pub fn reverify(&self) -> bool {
        match self.witness_set() {
            Some(s) => {
                s.len() as u32 == self.cardinality
                    && s.special_directions().len() as u32 == self.special
            }
            None => self.witness.is_none(),
        }
    }
}
