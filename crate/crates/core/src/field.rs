//! Arithmetic in the prime field `F_p` for small odd primes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted anywhere in the crate.
pub const MAX_PRIME: u32 = 97;

/// An odd prime `3 <= p <= 97`, checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !(3..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p as u64));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of points of the plane, `p^2`.
    #[inline]
    pub fn plane_size(self) -> usize {
        (self.0 * self.0) as usize
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.0
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, (self.0 - 2) as u64))
        }
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for display only.
    pub fn signed(self, a: u32) -> i64 {
        let a = (a % self.0) as i64;
        if a > self.0 as i64 / 2 {
            a - self.0 as i64
        } else {
            a
        }
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Odd primes up to and including `max`.
pub fn primes_up_to(max: u32) -> Vec<Prime> {
    (3..=max.min(MAX_PRIME))
        .filter(|&n| is_prime(n))
        .map(Prime)
        .collect()
}
