//! Cyclic row vectors over `Q`, the shift `v^(k)` and the operators
//! `L_j(v) = sum_{i=0}^{p-2} (p-i-1)/p * v^(i*j)`.

use std::ops::{Add, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::Rational;

/// Length-`p` rational vector with indices taken mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowVector {
    p: Prime,
    entries: Vec<Rational>,
}

impl RowVector {
    pub fn zeros(p: Prime) -> Self {
        RowVector {
            p,
            entries: vec![Rational::zero(); p.get() as usize],
        }
    }

    /// The all-ones vector.
    pub fn ones(p: Prime) -> Self {
        RowVector {
            p,
            entries: vec![Rational::one(); p.get() as usize],
        }
    }

    /// `e` with a single 1 at index `i mod p`.
    pub fn unit(p: Prime, i: i64) -> Self {
        let mut v = RowVector::zeros(p);
        v.entries[p.reduce(i) as usize] = Rational::one();
        v
    }

    pub fn from_integers(p: Prime, vals: &[i64]) -> Result<Self> {
        if vals.len() != p.get() as usize {
            return Err(Error::Dimension(format!(
                "row of length {} for p = {p}",
                vals.len()
            )));
        }
        Ok(RowVector {
            p,
            entries: vals
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn get(&self, i: i64) -> &Rational {
        &self.entries[self.p.reduce(i) as usize]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn scale(&self, s: &Rational) -> RowVector {
        RowVector {
            p: self.p,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |a, e| a + e)
    }
}

impl Add<&RowVector> for &RowVector {
    type Output = RowVector;

    fn add(self, rhs: &RowVector) -> RowVector {
        assert_eq!(self.p, rhs.p);
        RowVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&RowVector> for &RowVector {
    type Output = RowVector;

    fn sub(self, rhs: &RowVector) -> RowVector {
        assert_eq!(self.p, rhs.p);
        RowVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// `result(i) = v(i - k)`.
pub fn shift(v: &RowVector, k: i64) -> RowVector {
    let p = v.p;
    RowVector {
        p,
        entries: (0..p.get() as i64).map(|i| v.get(i - k).clone()).collect(),
    }
}

/// `v_j`: `+1` at index 0 and `-1` at index `j`.
pub fn basis_vector(p: Prime, j: i64) -> Result<RowVector> {
    let j = p.reduce(j);
    if j == 0 {
        return Err(Error::invalid("v_j needs j != 0 mod p"));
    }
    let mut v = RowVector::unit(p, 0);
    v.entries[j as usize] = -Rational::one();
    Ok(v)
}

/// `L_j(v) = sum_{i=0}^{p-2} (p-i-1)/p * v^(i*j)`.
pub fn l_operator(j: i64, v: &RowVector) -> Result<RowVector> {
    let p = v.p;
    if p.reduce(j) == 0 {
        return Err(Error::invalid("L_j needs j != 0 mod p"));
    }
    let q = p.get() as i64;
    let mut acc = vec![Rational::zero(); q as usize];
    for i in 0..q - 1 {
        let weight = Rational::from_integer((q - i - 1).into());
        let off = i * j;
        for (t, slot) in acc.iter_mut().enumerate() {
            let e = v.get(t as i64 - off);
            if !e.is_zero() {
                *slot += e * &weight;
            }
        }
    }
    let denom = Rational::from_integer(q.into());
    Ok(RowVector {
        p,
        entries: acc.into_iter().map(|e| e / &denom).collect(),
    })
}

/// `l in 1..p` with `k*l = j mod p`.
pub fn progression_length(p: Prime, j: i64, k: i64) -> Option<u32> {
    let j = p.reduce(j);
    let kinv = p.inv(p.reduce(k))?;
    (j != 0).then(|| p.mul(j, kinv))
}

/// `sum_{a=0}^{l-1} e^(a*k)` with `e` the unit vector at index 0.
pub fn unit_progression(p: Prime, k: i64, l: u32) -> RowVector {
    (0..l as i64).fold(RowVector::zeros(p), |acc, a| {
        &acc + &RowVector::unit(p, a * k)
    })
}

/// `(1/p)*1 + L_j(v_j) = e`.
pub fn lemma_identity_one(p: Prime, j: i64) -> Result<bool> {
    let v = basis_vector(p, j)?;
    let lhs =
        &RowVector::ones(p).scale(&Rational::new(1.into(), p.get().into())) + &l_operator(j, &v)?;
    Ok(lhs == RowVector::unit(p, 0))
}

/// `(l/p)*1 + L_k(v_j) = sum_{a<l} e^(a*k)` where `k*l = j mod p`.
pub fn lemma_identity_two(p: Prime, j: i64, k: i64) -> Result<bool> {
    let l = progression_length(p, j, k)
        .ok_or_else(|| Error::invalid("lemma identity needs j, k != 0 mod p"))?;
    let v = basis_vector(p, j)?;
    let bg = RowVector::ones(p).scale(&Rational::new(l.into(), p.get().into()));
    Ok(&bg + &l_operator(k, &v)? == unit_progression(p, k, l))
}

/// `v_j = sum_{a=0}^{l-1} v_k^(a*k)` where `k*l = j mod p`.
pub fn telescoping_identity(p: Prime, j: i64, k: i64) -> Result<bool> {
    let l = progression_length(p, j, k)
        .ok_or_else(|| Error::invalid("telescoping identity needs j, k != 0 mod p"))?;
    let vk = basis_vector(p, k)?;
    let sum = (0..l as i64).fold(RowVector::zeros(p), |acc, a| &acc + &shift(&vk, a * k));
    Ok(sum == basis_vector(p, j)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub p: u32,
    pub identity_one_checked: usize,
    pub identity_two_checked: usize,
    /// `(j, k)` pairs that failed; `k = 0` marks the first identity.
    pub failures: Vec<(u32, u32)>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks both identities for every `j, k in 1..p`.
pub fn verify_lemma(p: Prime) -> LemmaReport {
    use rayon::prelude::*;
    let q = p.get() as i64;
    let mut failures: Vec<(u32, u32)> = (1..q)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut bad = Vec::new();
            if !lemma_identity_one(p, j).unwrap() {
                bad.push((j as u32, 0));
            }
            for k in 1..q {
                if !lemma_identity_two(p, j, k).unwrap() {
                    bad.push((j as u32, k as u32));
                }
            }
            bad
        })
        .collect();
    failures.sort_unstable();
    LemmaReport {
        p: p.get(),
        identity_one_checked: (q - 1) as usize,
        identity_two_checked: ((q - 1) * (q - 1)) as usize,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ints(p: Prime, v: &[i64]) -> RowVector {
        RowVector::from_integers(p, v).unwrap()
    }

    #[test]
    fn shift_examples() {
        let p = pr(3);
        let v = ints(p, &[1, -1, 0]);
        assert_eq!(shift(&v, 1), ints(p, &[0, 1, -1]));
        assert_eq!(shift(&v, 3), v);
        assert_eq!(shift(&v, 0), v);
        assert_eq!(shift(&shift(&v, 2), 5), shift(&v, 7));
    }

    #[test]
    fn basis_vectors() {
        let p = pr(3);
        assert_eq!(basis_vector(p, 1).unwrap(), ints(p, &[1, -1, 0]));
        assert_eq!(basis_vector(p, 2).unwrap(), ints(p, &[1, 0, -1]));
        assert!(basis_vector(p, 3).is_err());
    }

    #[test]
    fn l_operator_small_case() {
        let p = pr(3);
        let out = l_operator(1, &basis_vector(p, 1).unwrap()).unwrap();
        assert_eq!(out.entries(), &[q(2, 3), q(-1, 3), q(-1, 3)]);
        assert!(l_operator(0, &out).is_err());
    }

    #[test]
    fn telescoping_up_to_13() {
        for p in crate::field::primes_up_to(13) {
            for j in 1..p.get() as i64 {
                for k in 1..p.get() as i64 {
                    assert!(telescoping_identity(p, j, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn lemma_small_primes() {
        for p in crate::field::primes_up_to(13) {
            assert!(verify_lemma(p).passed());
        }
    }
}
