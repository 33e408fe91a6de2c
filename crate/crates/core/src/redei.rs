//! Rédei polynomials `H_S(x,y) = prod_{(a,b) in S} (x - a*y + b)` and the
//! power-sum machinery built on their coefficients.
//!
//! Coefficients are stored in the product-consistent convention
//! `H_S = sum_i x^{|S|-i} g_i(y)` with `g_i = sigma_i(b_j - a_j*y)`. The
//! alternative sign convention `sigma_i(a_j*y - b_j)` differs by `(-1)^i` and
//! is available through [`SymCoeffs::alternate_sign`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{Direction, PointSet};

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UniPoly {
    #[serde(skip)]
    p: Prime,
    coeffs: Vec<u32>,
}

impl UniPoly {
    pub fn new(p: Prime, coeffs: impl IntoIterator<Item = u32>) -> Self {
        let mut poly = UniPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p.get()).collect(),
        };
        poly.trim();
        poly
    }

    pub fn zero(p: Prime) -> Self {
        UniPoly { p, coeffs: vec![] }
    }

    pub fn one(p: Prime) -> Self {
        UniPoly::new(p, [1])
    }

    /// `x^p - x`.
    pub fn frobenius_minus_x(p: Prime) -> Self {
        let mut c = vec![0u32; p.get() as usize + 1];
        c[1] = p.neg(1);
        c[p.get() as usize] = 1;
        UniPoly::new(p, c)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            self.p,
            (0..n).map(|i| self.p.add(self.coeff(i), other.coeff(i))),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u64 * b as u64) % p.get() as u64;
            }
        }
        UniPoly::new(p, c.into_iter().map(|v| v as u32))
    }

    /// Multiplies in place by `(x + r)`.
    pub fn mul_linear_monic(&mut self, r: u32) {
        let p = self.p;
        self.coeffs.push(0);
        for i in (0..self.coeffs.len()).rev() {
            let lower = if i > 0 { self.coeffs[i - 1] } else { 0 };
            self.coeffs[i] = p.add(p.mul(self.coeffs[i], r), lower);
        }
        self.trim();
    }

    pub fn pow(&self, n: u32) -> UniPoly {
        let mut acc = UniPoly::one(self.p);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, y: u32) -> u32 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| p.add(p.mul(acc, y), c))
    }

    pub fn scale(&self, s: u32) -> UniPoly {
        UniPoly::new(self.p, self.coeffs.iter().map(|&c| self.p.mul(c, s)))
    }
}

/// `H_S(x, m) = prod_{(a,b) in S} (x - a*m + b)`.
pub fn redei_at(s: &PointSet, m: u32) -> UniPoly {
    let p = s.prime();
    let mut h = UniPoly::one(p);
    for pt in s.iter() {
        h.mul_linear_monic(p.sub(pt.y, p.mul(pt.x, m % p.get())));
    }
    h
}

/// Compares `H_S(x,m)` with `(x^p - x)^{|S|/p}`. Detects equidistribution in
/// the slope direction `(1,m)`.
pub fn is_equidistributed_redei(s: &PointSet, m: u32) -> Result<bool> {
    let p = s.prime();
    if !s.len().is_multiple_of(p.get() as usize) {
        return Err(Error::invalid(format!(
            "|S| = {} is not divisible by p = {p}",
            s.len()
        )));
    }
    let n = (s.len() / p.get() as usize) as u32;
    Ok(redei_at(s, m) == UniPoly::frobenius_minus_x(p).pow(n))
}

/// The slope direction matching Rédei parameter `m`.
pub fn direction_of_parameter(m: u32) -> Direction {
    Direction::Slope(m)
}

/// `g_0, ..., g_|S|` as polynomials in `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymCoeffs {
    pub coeffs: Vec<UniPoly>,
}

impl SymCoeffs {
    pub fn get(&self, i: usize) -> &UniPoly {
        &self.coeffs[i]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sigma_i(a_j*y - b_j) = (-1)^i g_i`.
    pub fn alternate_sign(&self) -> SymCoeffs {
        SymCoeffs {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    if i % 2 == 1 {
                        g.scale(g.p.neg(1))
                    } else {
                        g.clone()
                    }
                })
                .collect(),
        }
    }

    /// Evaluates `sum_i x^{n-i} g_i(m)` as a polynomial in `x`.
    pub fn specialize(&self, m: u32) -> UniPoly {
        let n = self.coeffs.len() - 1;
        let p = self.coeffs[0].p;
        UniPoly::new(p, (0..=n).map(|k| self.coeffs[n - k].eval(m)))
    }

    /// Largest `L` with `g_1 = ... = g_L = 0` identically.
    pub fn vanishing_prefix(&self) -> usize {
        self.coeffs[1..].iter().take_while(|g| g.is_zero()).count()
    }
}

pub fn symmetric_coefficients(s: &PointSet) -> SymCoeffs {
    let p = s.prime();
    let mut e = vec![UniPoly::one(p)];
    for pt in s.iter() {
        // t = b - a*y
        let t = UniPoly::new(p, [pt.y, p.neg(pt.x)]);
        e.push(UniPoly::zero(p));
        for i in (1..e.len()).rev() {
            let term = e[i - 1].mul(&t);
            e[i] = e[i].add(&term);
        }
    }
    SymCoeffs { coeffs: e }
}

/// `sum_{(a,b) in S} a^l mod p`.
pub fn power_sum_leading(s: &PointSet, l: u32) -> Result<u32> {
    if l == 0 {
        return Err(Error::invalid("power sums start at l = 1"));
    }
    let p = s.prime();
    Ok(s.iter()
        .fold(0, |acc, pt| p.add(acc, p.pow(pt.x, l as u64))))
}

/// `w_j` = number of points of `S` with first coordinate `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnCounts {
    #[serde(skip)]
    p: Prime,
    pub w: Vec<u64>,
}

impl ColumnCounts {
    pub fn new(p: Prime, w: Vec<u64>) -> Result<Self> {
        if w.len() != p.get() as usize {
            return Err(Error::Dimension(format!(
                "w has length {}, expected {p}",
                w.len()
            )));
        }
        Ok(ColumnCounts { p, w })
    }

    pub fn of(s: &PointSet) -> Self {
        let p = s.prime();
        let mut w = vec![0u64; p.get() as usize];
        for pt in s.iter() {
            w[pt.x as usize] += 1;
        }
        ColumnCounts { p, w }
    }

    pub fn total(&self) -> u64 {
        self.w.iter().sum()
    }

    /// `sum_j w_j j^l mod p`, with `0^0 = 1`.
    pub fn moment(&self, l: u32) -> u32 {
        let p = self.p;
        self.w.iter().enumerate().fold(0, |acc, (j, &wj)| {
            p.add(
                acc,
                p.mul((wj % p.get() as u64) as u32, p.pow(j as u32, l as u64)),
            )
        })
    }
}

/// Largest `L <= p-1` with `sum_j w_j j^l = 0 mod p` for every `1 <= l <= L`.
pub fn orthogonality_level(w: &ColumnCounts) -> u32 {
    let p = w.p.get();
    (1..p).take_while(|&l| w.moment(l) == 0).count() as u32
}

/// `(alpha, beta)` with `w_j = alpha*j + beta mod p` for all `j`, if any.
pub fn affine_profile_test(w: &ColumnCounts) -> Option<(u32, u32)> {
    let p = w.p;
    let r = |j: usize| (w.w[j] % p.get() as u64) as u32;
    let beta = r(0);
    let alpha = p.sub(r(1), beta);
    (0..p.get() as usize)
        .all(|j| r(j) == p.add(p.mul(alpha, j as u32), beta))
        .then_some((alpha, beta))
}

/// Whether rows `i` and `j` of the Vandermonde matrix `(k^l)` are orthogonal
/// in `F_p^p`.
pub fn vandermonde_rows_orthogonal(p: Prime, i: u32, j: u32) -> bool {
    (0..p.get()).fold(0, |acc, k| {
        p.add(acc, p.mul(p.pow(k, i as u64), p.pow(k, j as u64)))
    }) == 0
}

/// Rank of a matrix over `F_p` (rows are consumed).
fn rank_mod_p(p: Prime, mut rows: Vec<Vec<u32>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = p.inv(rows[rank][c]).unwrap();
        let pivot: Vec<u32> = rows[rank].iter().map(|&v| p.mul(v, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot) {
                    *v = p.sub(*v, p.mul(f, pv));
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// For the span `<1, x, ..., x^k>` of Vandermonde rows, returns the largest
/// `e` such that `<1, x, ..., x^e>` is exactly its orthogonal complement, or
/// `None` when the complement is not of that shape. Decided by linear algebra.
pub fn vandermonde_complement_exponent(p: Prime, k: u32) -> Option<u32> {
    let row = |l: u32| -> Vec<u32> { (0..p.get()).map(|j| p.pow(j, l as u64)).collect() };
    let span: Vec<Vec<u32>> = (0..=k).map(row).collect();
    let complement_dim = p.get() as usize - rank_mod_p(p, span.clone());
    let orthogonal = |v: &Vec<u32>| {
        span.iter().all(|s| {
            s.iter()
                .zip(v)
                .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b)))
                == 0
        })
    };
    let e = (0..p.get()).take_while(|&m| orthogonal(&row(m))).count();
    if e == 0 {
        return None;
    }
    let basis: Vec<Vec<u32>> = (0..e as u32).map(row).collect();
    (rank_mod_p(p, basis) == complement_dim).then(|| e as u32 - 1)
}
