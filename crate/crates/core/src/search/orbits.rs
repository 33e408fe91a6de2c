//! One representative per `AGL(2,p)`-orbit of `n`-subsets.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use super::kernel::{binomial, combinations, group_permutations, orbit_of, LineMasks};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::PointSet;

/// Largest number of candidates enumerated at `p = 7`, where visited orbits
/// live in a hash set.
pub const MAX_HASHED_CANDIDATES: u64 = 2_000_000;

enum Visited {
    Bits(Vec<u64>),
    Hashed(HashSet<u64>),
}

impl Visited {
    fn contains(&self, m: u64) -> bool {
        match self {
            Visited::Bits(b) => b[(m >> 6) as usize] >> (m & 63) & 1 == 1,
            Visited::Hashed(h) => h.contains(&m),
        }
    }

    fn insert(&mut self, m: u64) {
        match self {
            Visited::Bits(b) => b[(m >> 6) as usize] |= 1 << (m & 63),
            Visited::Hashed(h) => {
                h.insert(m);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRepresentative {
    /// Numerically smallest mask of the orbit.
    pub mask: u64,
    pub orbit_size: u64,
}

impl OrbitRepresentative {
    pub fn set(&self, p: Prime) -> PointSet {
        PointSet::from_mask(p, self.mask)
    }
}

/// Lazy orbit enumeration in increasing order of representative masks.
pub struct OrbitEnumeration {
    perms: Arc<Vec<Vec<u8>>>,
    candidates: Box<dyn Iterator<Item = u64> + Send>,
    visited: Visited,
}

impl Iterator for OrbitEnumeration {
    type Item = OrbitRepresentative;

    fn next(&mut self) -> Option<OrbitRepresentative> {
        for m in self.candidates.by_ref() {
            if self.visited.contains(m) {
                continue;
            }
            let orbit = orbit_of(&self.perms, m);
            for &o in &orbit {
                self.visited.insert(o);
            }
            return Some(OrbitRepresentative {
                mask: m,
                orbit_size: orbit.len() as u64,
            });
        }
        None
    }
}

/// Orbit enumeration for `p <= 5`, and for `p = 7` when there are at most
/// [`MAX_HASHED_CANDIDATES`] subsets of the given size.
pub fn enumerate_orbits(p: Prime, cardinality: u32) -> Result<OrbitEnumeration> {
    enumerate_orbits_with(p, cardinality, Arc::new(group_permutations(p)))
}

pub(crate) fn enumerate_orbits_with(
    p: Prime,
    cardinality: u32,
    perms: Arc<Vec<Vec<u8>>>,
) -> Result<OrbitEnumeration> {
    LineMasks::new(p)?;
    let n = p.plane_size() as u32;
    if cardinality > n {
        return Err(Error::invalid(format!(
            "cardinality {cardinality} exceeds {n}"
        )));
    }
    let visited = if p.get() <= 5 {
        Visited::Bits(vec![0; ((1u64 << n) / 64).max(1) as usize])
    } else if binomial(n as u64, cardinality as u64) <= MAX_HASHED_CANDIDATES {
        Visited::Hashed(HashSet::new())
    } else {
        return Err(Error::CapExceeded {
            what: "orbit enumeration at this cardinality",
            p: p.get(),
            cap: 5,
        });
    };
    Ok(OrbitEnumeration {
        perms,
        candidates: Box::new(combinations(n, cardinality)),
        visited,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitMass {
    pub orbits: u64,
    pub mass: u64,
    pub expected: u64,
}

impl OrbitMass {
    pub fn passed(&self) -> bool {
        self.mass == self.expected
    }
}

/// Sum of orbit sizes against `C(p^2, cardinality)`.
pub fn orbit_mass_check(p: Prime, cardinality: u32) -> Result<OrbitMass> {
    let (orbits, mass) =
        enumerate_orbits(p, cardinality)?.fold((0, 0), |(o, m), r| (o + 1, m + r.orbit_size));
    Ok(OrbitMass {
        orbits,
        mass,
        expected: binomial(p.plane_size() as u64, cardinality as u64),
    })
}
