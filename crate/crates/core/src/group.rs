//! The affine group `AGL(2,p)` and its action on sets, grids and directions.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{Direction, Grid, Point, PointSet};

/// Largest prime for which [`canonical_form`] enumerates the group.
pub const CANONICAL_FORM_CAP: u32 = 13;

/// `x -> A x + t` with `A` invertible over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    p: Prime,
    /// Row-major `[[a, b], [c, d]]`.
    a: [[u32; 2]; 2],
    t: [u32; 2],
}

impl AffineMap {
    pub fn new(p: Prime, a: [[i64; 2]; 2], t: [i64; 2]) -> Result<Self> {
        let a = [
            [p.reduce(a[0][0]), p.reduce(a[0][1])],
            [p.reduce(a[1][0]), p.reduce(a[1][1])],
        ];
        let g = AffineMap {
            p,
            a,
            t: [p.reduce(t[0]), p.reduce(t[1])],
        };
        if g.det() == 0 {
            return Err(Error::invalid(format!(
                "singular linear part {a:?} mod {p}"
            )));
        }
        Ok(g)
    }

    pub fn identity(p: Prime) -> Self {
        AffineMap {
            p,
            a: [[1, 0], [0, 1]],
            t: [0, 0],
        }
    }

    pub fn translation(p: Prime, tx: i64, ty: i64) -> Self {
        AffineMap {
            t: [p.reduce(tx), p.reduce(ty)],
            ..AffineMap::identity(p)
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn matrix(&self) -> [[u32; 2]; 2] {
        self.a
    }

    pub fn offset(&self) -> [u32; 2] {
        self.t
    }

    pub fn det(&self) -> u32 {
        let p = self.p;
        p.sub(
            p.mul(self.a[0][0], self.a[1][1]),
            p.mul(self.a[0][1], self.a[1][0]),
        )
    }

    #[inline]
    fn linear(&self, x: u32, y: u32) -> (u32, u32) {
        let p = self.p.get();
        (
            (self.a[0][0] * x + self.a[0][1] * y) % p,
            (self.a[1][0] * x + self.a[1][1] * y) % p,
        )
    }

    #[inline]
    pub fn apply_point(&self, pt: Point) -> Point {
        let (x, y) = self.linear(pt.x, pt.y);
        Point::new(self.p.add(x, self.t[0]), self.p.add(y, self.t[1]))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let p = self.p;
        let mut a = [[0u32; 2]; 2];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = p.add(
                    p.mul(self.a[i][0], other.a[0][j]),
                    p.mul(self.a[i][1], other.a[1][j]),
                );
            }
        }
        let (tx, ty) = self.linear(other.t[0], other.t[1]);
        AffineMap {
            p,
            a,
            t: [p.add(tx, self.t[0]), p.add(ty, self.t[1])],
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let p = self.p;
        let di = p.inv(self.det()).expect("invertible");
        let a = [
            [p.mul(self.a[1][1], di), p.mul(p.neg(self.a[0][1]), di)],
            [p.mul(p.neg(self.a[1][0]), di), p.mul(self.a[0][0], di)],
        ];
        let lin = AffineMap { p, a, t: [0, 0] };
        let (tx, ty) = lin.linear(self.t[0], self.t[1]);
        AffineMap {
            p,
            a,
            t: [p.neg(tx), p.neg(ty)],
        }
    }

    /// `perm[i]` is the index of the image of the point with index `i`.
    pub fn permutation(&self) -> Vec<u32> {
        (0..self.p.plane_size())
            .map(|i| self.apply_point(Point::from_index(self.p, i)).index(self.p) as u32)
            .collect()
    }

    pub fn apply_set(&self, s: &PointSet) -> PointSet {
        assert_eq!(s.prime(), self.p);
        let mut out = PointSet::empty(self.p);
        for pt in s.iter() {
            out.insert(self.apply_point(pt));
        }
        out
    }
}

/// The pushed-forward grid: `result(g(pt)) = f(pt)`.
pub fn apply_affine<T: Clone>(g: &AffineMap, f: &Grid<T>) -> Result<Grid<T>> {
    if g.p != f.prime() {
        return Err(Error::PrimeMismatch(g.p.get(), f.prime().get()));
    }
    let inv = g.inverse();
    Ok(Grid::from_fn(g.p, |pt| f.get(inv.apply_point(pt)).clone()))
}

/// `d(A u)` for a representative `u` of `d`.
pub fn direction_image(g: &AffineMap, d: Direction) -> Direction {
    let (u0, u1) = d.vector();
    let (v0, v1) = g.linear(u0, u1);
    Direction::of_vector(g.p, v0 as i64, v1 as i64).expect("invertible map")
}

pub fn direction_set_image(g: &AffineMap, ds: &BTreeSet<Direction>) -> BTreeSet<Direction> {
    ds.iter().map(|&d| direction_image(g, d)).collect()
}

/// A linear map sending `d1, d2, d3` to `(0,1), (1,0), (1,1)` respectively.
pub fn triple_transporter(
    p: Prime,
    d1: Direction,
    d2: Direction,
    d3: Direction,
) -> Result<AffineMap> {
    if d1 == d2 || d1 == d3 || d2 == d3 {
        return Err(Error::invalid(
            "triple_transporter needs three distinct directions",
        ));
    }
    let (u1, u2, u3) = (d1.vector(), d2.vector(), d3.vector());
    // Solve u3 = alpha*u2 + beta*u1 by Cramer's rule; both coefficients are
    // nonzero because the directions are distinct.
    let det = p.sub(p.mul(u2.0, u1.1), p.mul(u1.0, u2.1));
    let di = p.inv(det).expect("distinct directions are independent");
    let alpha = p.mul(p.sub(p.mul(u3.0, u1.1), p.mul(u1.0, u3.1)), di);
    let beta = p.mul(p.sub(p.mul(u2.0, u3.1), p.mul(u3.0, u2.1)), di);
    // B sends (1,0) -> alpha*u2 and (0,1) -> beta*u1, hence (1,1) -> u3.
    let b = AffineMap::new(
        p,
        [
            [p.mul(alpha, u2.0) as i64, p.mul(beta, u1.0) as i64],
            [p.mul(alpha, u2.1) as i64, p.mul(beta, u1.1) as i64],
        ],
        [0, 0],
    )?;
    Ok(b.inverse())
}

/// All invertible `2x2` matrices over `F_p` as linear maps, in a fixed order.
pub fn general_linear_group(p: Prime) -> Vec<AffineMap> {
    let q = p.get() as i64;
    let mut out = Vec::with_capacity(((q * q - 1) * (q * q - q)) as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if let Ok(g) = AffineMap::new(p, [[a, b], [c, d]], [0, 0]) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

/// All of `AGL(2,p)`; only sensible for small `p`.
pub fn affine_group(p: Prime) -> Vec<AffineMap> {
    let q = p.get() as i64;
    let gl = general_linear_group(p);
    let mut out = Vec::with_capacity(gl.len() * (q * q) as usize);
    for g in &gl {
        for tx in 0..q {
            for ty in 0..q {
                out.push(AffineMap::translation(p, tx, ty).compose(g));
            }
        }
    }
    out
}

/// `|AGL(2,p)| = p^2 (p^2-1)(p^2-p)`.
pub fn affine_group_order(p: Prime) -> u64 {
    let q = p.get() as u64;
    q * q * (q * q - 1) * (q * q - q)
}

/// Lexicographically least image of `s` under `AGL(2,p)`, comparing sorted
/// point-index lists. Two sets share a canonical form iff they lie in the
/// same orbit.
pub fn canonical_form(s: &PointSet) -> Result<PointSet> {
    let p = s.prime();
    if p.get() > CANONICAL_FORM_CAP {
        return Err(Error::CapExceeded {
            what: "canonical_form",
            p: p.get(),
            cap: CANONICAL_FORM_CAP,
        });
    }
    if s.is_empty() {
        return Ok(s.clone());
    }
    let q = p.get();
    let pts: Vec<Point> = s.iter().collect();
    // A least image contains the origin, so only the translations moving one
    // of the image points onto the origin need to be tried.
    let best = general_linear_group(p)
        .par_iter()
        .map(|g| {
            let image: Vec<Point> = pts.iter().map(|&pt| g.apply_point(pt)).collect();
            let mut best: Option<Vec<u32>> = None;
            let mut cand = Vec::with_capacity(image.len());
            for o in &image {
                cand.clear();
                cand.extend(
                    image
                        .iter()
                        .map(|pt| p.sub(pt.y, o.y) * q + p.sub(pt.x, o.x)),
                );
                cand.sort_unstable();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand.clone());
                }
            }
            best.expect("nonempty")
        })
        .min()
        .expect("group is nonempty");
    let mut out = PointSet::empty(p);
    for i in best {
        out.insert_index(i as usize);
    }
    Ok(out)
}

/// Orbit invariant: sorted multiset over directions of sorted line profiles.
pub fn orbit_invariant(s: &PointSet) -> Vec<Vec<i64>> {
    let mut inv: Vec<Vec<i64>> = Direction::all(s.prime())
        .map(|d| {
            let mut sums = s.profile(d).sums;
            sums.sort_unstable();
            sums
        })
        .collect();
    inv.sort();
    inv
}

/// Orbit membership test, invariant-filtered before canonical comparison.
pub fn same_orbit(a: &PointSet, b: &PointSet) -> Result<bool> {
    if a.prime() != b.prime() {
        return Err(Error::PrimeMismatch(a.prime().get(), b.prime().get()));
    }
    if a.len() != b.len() || orbit_invariant(a) != orbit_invariant(b) {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::special_directions;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(general_linear_group(pr(3)).len(), 48);
        assert_eq!(affine_group(pr(3)).len() as u64, affine_group_order(pr(3)));
        assert_eq!(affine_group_order(pr(5)), 12000);
    }

    #[test]
    fn swap_and_shear_on_directions() {
        let p = pr(5);
        let swap = AffineMap::new(p, [[0, 1], [1, 0]], [0, 0]).unwrap();
        assert_eq!(
            direction_image(&swap, Direction::HORIZONTAL),
            Direction::Vertical
        );
        assert_eq!(
            direction_image(&swap, Direction::Vertical),
            Direction::HORIZONTAL
        );
        assert_eq!(
            direction_image(&swap, Direction::Slope(1)),
            Direction::Slope(1)
        );
        let shear = AffineMap::new(p, [[1, 0], [1, 1]], [0, 0]).unwrap();
        assert_eq!(
            direction_image(&shear, Direction::HORIZONTAL),
            Direction::Slope(1)
        );
    }

    #[test]
    fn direction_image_is_a_bijection() {
        let p = pr(7);
        for g in general_linear_group(p).iter().step_by(37) {
            let img: BTreeSet<_> = Direction::all(p).map(|d| direction_image(g, d)).collect();
            assert_eq!(img.len(), 8);
        }
    }

    #[test]
    fn singular_maps_rejected() {
        assert!(AffineMap::new(pr(5), [[1, 2], [2, 4]], [0, 0]).is_err());
    }

    #[test]
    fn inverse_and_compose() {
        let p = pr(7);
        let g = AffineMap::new(p, [[2, 3], [1, 4]], [4, 6]).unwrap();
        assert_eq!(g.compose(&g.inverse()), AffineMap::identity(p));
        assert_eq!(g.inverse().compose(&g), AffineMap::identity(p));
    }

    #[test]
    fn transporter_identity_triple() {
        let p = pr(5);
        let g = triple_transporter(
            p,
            Direction::Vertical,
            Direction::HORIZONTAL,
            Direction::Slope(1),
        )
        .unwrap();
        for d in Direction::all(p) {
            assert_eq!(direction_image(&g, d), d);
        }
    }

    #[test]
    fn transporter_exhaustive_p5() {
        let p = pr(5);
        let target = [
            Direction::Vertical,
            Direction::HORIZONTAL,
            Direction::Slope(1),
        ];
        let dirs: Vec<_> = Direction::all(p).collect();
        for &a in &dirs {
            for &b in &dirs {
                for &c in &dirs {
                    let r = triple_transporter(p, a, b, c);
                    if a == b || a == c || b == c {
                        assert!(r.is_err());
                        continue;
                    }
                    let g = r.unwrap();
                    assert_eq!(
                        [
                            direction_image(&g, a),
                            direction_image(&g, b),
                            direction_image(&g, c)
                        ],
                        target
                    );
                }
            }
        }
        // Oracle: some element of GL(2,5) achieves every distinct triple.
        let gl = general_linear_group(p);
        let reached: BTreeSet<_> = gl
            .iter()
            .map(|g| {
                let inv = g.inverse();
                (
                    direction_image(&inv, target[0]),
                    direction_image(&inv, target[1]),
                    direction_image(&inv, target[2]),
                )
            })
            .collect();
        assert_eq!(reached.len(), 6 * 5 * 4);
    }

    #[test]
    fn transporters_of_permuted_triples_differ_by_a_setwise_stabilizer() {
        let p = pr(7);
        let (a, b, c) = (
            Direction::Slope(2),
            Direction::Slope(5),
            Direction::Vertical,
        );
        let g = triple_transporter(p, a, b, c).unwrap();
        let h = triple_transporter(p, c, a, b).unwrap();
        let k = h.compose(&g.inverse());
        let base: BTreeSet<_> = [
            Direction::Vertical,
            Direction::HORIZONTAL,
            Direction::Slope(1),
        ]
        .into();
        assert_eq!(direction_set_image(&k, &base), base);
    }

    #[test]
    fn canonical_form_small_cases() {
        let p = pr(5);
        assert!(canonical_form(&PointSet::empty(p)).unwrap().is_empty());
        let single = PointSet::from_points(p, [Point::new(3, 1)]).unwrap();
        let c = canonical_form(&single).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![Point::new(0, 0)]);
        assert!(canonical_form(&PointSet::empty(pr(17))).is_err());
    }

    #[test]
    fn translation_preserves_special_directions() {
        let p = pr(7);
        let s = PointSet::from_fn(p, |pt| pt.y < pt.x);
        let f: Grid<i64> = s.to_grid();
        let g = AffineMap::translation(p, 3, 5);
        let moved = apply_affine(&g, &f).unwrap();
        assert_eq!(special_directions(&moved), special_directions(&f));
        assert_eq!(moved.total(), f.total());
    }
}
