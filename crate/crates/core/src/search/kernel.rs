//! `u64` bitmask kernel for `p <= 7`: bit `y*p + x` stands for `(x, y)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::group::affine_group;
use crate::plane::{line_points, Direction};

/// Largest prime whose plane fits into a `u64`.
pub const MAX_MASK_PRIME: u32 = 7;

#[derive(Clone, Debug)]
pub struct LineMasks {
    p: Prime,
    /// `lines[d * p + c]` is the line with index `c` in direction `d`.
    lines: Vec<u64>,
}

impl LineMasks {
    pub fn new(p: Prime) -> Result<Self> {
        if p.get() > MAX_MASK_PRIME {
            return Err(Error::CapExceeded {
                what: "bitmask kernel",
                p: p.get(),
                cap: MAX_MASK_PRIME,
            });
        }
        let lines = Direction::all(p)
            .flat_map(|d| (0..p.get()).map(move |c| line_points(p, d, c).to_mask().unwrap()))
            .collect();
        Ok(LineMasks { p, lines })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn full(&self) -> u64 {
        let n = self.p.plane_size();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn line(&self, d: usize, c: usize) -> u64 {
        self.lines[d * self.p.get() as usize + c]
    }

    pub fn profile(&self, mask: u64, d: usize) -> Vec<u32> {
        let q = self.p.get() as usize;
        self.lines[d * q..(d + 1) * q]
            .iter()
            .map(|l| (mask & l).count_ones())
            .collect()
    }

    /// Bit `i` is set when the direction with index `i` is special.
    pub fn special_bits(&self, mask: u64) -> u32 {
        let q = self.p.get() as usize;
        let all = (1u32 << (q + 1)) - 1;
        let n = mask.count_ones();
        if !n.is_multiple_of(q as u32) {
            return all;
        }
        let target = n / q as u32;
        let mut bits = 0;
        for (d, lines) in self.lines.chunks_exact(q).enumerate() {
            if lines.iter().any(|l| (mask & l).count_ones() != target) {
                bits |= 1 << d;
            }
        }
        bits
    }

    pub fn special_count(&self, mask: u64) -> u32 {
        self.special_bits(mask).count_ones()
    }

    /// Every union of parallel lines other than the empty set and the plane.
    pub fn line_unions(&self) -> Vec<u64> {
        let q = self.p.get() as usize;
        let mut out: Vec<u64> = (0..=q)
            .flat_map(|d| {
                (1u32..(1 << q) - 1).map(move |sel| {
                    (0..q)
                        .filter(|c| sel >> c & 1 == 1)
                        .fold(0u64, |acc, c| acc | self.line(d, c))
                })
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Point permutations of all of `AGL(2,p)`.
pub fn group_permutations(p: Prime) -> Vec<Vec<u8>> {
    affine_group(p)
        .par_iter()
        .map(|g| g.permutation().into_iter().map(|i| i as u8).collect())
        .collect()
}

pub fn permute_mask(perm: &[u8], mut mask: u64) -> u64 {
    let mut out = 0u64;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        out |= 1u64 << perm[i];
        mask &= mask - 1;
    }
    out
}

/// Full orbit of `mask` as a sorted, deduplicated list.
pub fn orbit_of(perms: &[Vec<u8>], mask: u64) -> Vec<u64> {
    let mut out: Vec<u64> = perms.iter().map(|g| permute_mask(g, mask)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Next mask with the same popcount (Gosper's hack). `None` past `limit` bits.
pub fn next_combination(x: u64, bits: u32) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    let next = (((r ^ x) >> 2) / c) | r;
    (bits == 64 || next >> bits == 0).then_some(next)
}

/// All `k`-subsets of `bits` bit positions, in increasing numeric order.
pub fn combinations(bits: u32, k: u32) -> impl Iterator<Item = u64> {
    let first = if k == 0 {
        Some(0)
    } else if k > bits {
        None
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::successors(first, move |&x| {
        if k == 0 {
            None
        } else {
            next_combination(x, bits)
        }
    })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Disjoint pieces covering all `k`-subsets of `bits` positions: each piece
/// fixes the lowest one or two elements and enumerates the rest.
#[derive(Clone, Copy, Debug)]
pub struct CombinationChunk {
    prefix: u64,
    rest_offset: u32,
    rest_bits: u32,
    rest_k: u32,
}

impl CombinationChunk {
    pub fn iter(self) -> impl Iterator<Item = u64> {
        combinations(self.rest_bits, self.rest_k)
            .map(move |m| self.prefix | (m << self.rest_offset))
    }
}

pub fn combination_chunks(bits: u32, k: u32) -> Vec<CombinationChunk> {
    let mut out = Vec::new();
    if k < 2 || k > bits {
        out.push(CombinationChunk {
            prefix: 0,
            rest_offset: 0,
            rest_bits: bits,
            rest_k: k,
        });
        return out;
    }
    for i in 0..bits {
        for j in i + 1..bits {
            if bits - j > k - 2 {
                out.push(CombinationChunk {
                    prefix: (1 << i) | (1 << j),
                    rest_offset: j + 1,
                    rest_bits: bits - j - 1,
                    rest_k: k - 2,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::PointSet;

    #[test]
    fn gosper_counts() {
        for (n, k) in [(9, 0), (9, 3), (9, 9), (25, 2), (12, 5)] {
            let v: Vec<u64> = combinations(n, k).collect();
            assert_eq!(v.len() as u64, binomial(n as u64, k as u64));
            assert!(v.windows(2).all(|w| w[0] < w[1]));
            assert!(v.iter().all(|m| m.count_ones() == k && m >> n == 0));
        }
        assert_eq!(combinations(3, 4).count(), 0);
    }

    #[test]
    fn chunks_partition_combinations() {
        for (n, k) in [(9, 3), (10, 5), (8, 1), (8, 8)] {
            let mut all: Vec<u64> = combination_chunks(n, k)
                .into_iter()
                .flat_map(|c| c.iter())
                .collect();
            all.sort_unstable();
            assert_eq!(all, combinations(n, k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn mask_special_matches_point_sets() {
        let p = Prime::new(3).unwrap();
        let lm = LineMasks::new(p).unwrap();
        for mask in 0u64..512 {
            let s = PointSet::from_mask(p, mask);
            let expected: u32 = s.special_directions().iter().map(|d| 1 << d.index(p)).sum();
            assert_eq!(lm.special_bits(mask), expected);
        }
    }

    #[test]
    fn line_union_count() {
        for q in [3, 5, 7] {
            let lm = LineMasks::new(Prime::new(q).unwrap()).unwrap();
            assert_eq!(
                lm.line_unions().len() as u64,
                (q as u64 + 1) * ((1 << q) - 2)
            );
        }
    }

    #[test]
    fn kernel_cap() {
        assert!(LineMasks::new(Prime::new(11).unwrap()).is_err());
    }
}
