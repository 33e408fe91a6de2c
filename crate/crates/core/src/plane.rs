//! Points, directions, lines and line-sum profiles of the affine plane `F_p^2`.
//!
//! Lines are parametrized canonically: the slope direction `(1,m)` owns the
//! lines `y = m*x + c`, the vertical direction `(0,1)` owns the lines `x = c`.
//! In both cases `c` is the line index.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl Point {
    pub fn new(x: u32, y: u32) -> Self {
        Point { x, y }
    }

    /// Row-major bit index `y*p + x`.
    #[inline]
    pub fn index(self, p: Prime) -> usize {
        (self.y * p.get() + self.x) as usize
    }

    #[inline]
    pub fn from_index(p: Prime, i: usize) -> Self {
        let p = p.get() as usize;
        Point::new((i % p) as u32, (i / p) as u32)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// One of the `p+1` directions of the plane.
///
/// The canonical representative is `(1,m)` for a slope direction and `(0,1)`
/// for the vertical one. The derived order puts all slopes first, ordered by
/// `m`, and the vertical direction last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Slope(u32),
    Vertical,
}

impl Direction {
    pub const HORIZONTAL: Direction = Direction::Slope(0);

    /// All `p+1` directions in canonical order.
    pub fn all(p: Prime) -> impl Iterator<Item = Direction> + Clone {
        (0..p.get())
            .map(Direction::Slope)
            .chain(std::iter::once(Direction::Vertical))
    }

    /// Dense index in `0..=p`: `m` for slopes, `p` for vertical.
    pub fn index(self, p: Prime) -> usize {
        match self {
            Direction::Slope(m) => m as usize,
            Direction::Vertical => p.get() as usize,
        }
    }

    pub fn from_index(p: Prime, i: usize) -> Self {
        if i == p.get() as usize {
            Direction::Vertical
        } else {
            Direction::Slope(i as u32)
        }
    }

    /// Direction of the vector `(a,b)`, or `None` for the zero vector.
    pub fn of_vector(p: Prime, a: i64, b: i64) -> Option<Self> {
        let (a, b) = (p.reduce(a), p.reduce(b));
        match (a, b) {
            (0, 0) => None,
            (0, _) => Some(Direction::Vertical),
            (a, b) => Some(Direction::Slope(p.mul(b, p.inv(a).unwrap()))),
        }
    }

    /// Direction determined by two distinct points.
    pub fn through(p: Prime, u: Point, v: Point) -> Option<Self> {
        Direction::of_vector(p, u.x as i64 - v.x as i64, u.y as i64 - v.y as i64)
    }

    pub fn vector(self) -> (u32, u32) {
        match self {
            Direction::Slope(m) => (1, m),
            Direction::Vertical => (0, 1),
        }
    }

    /// Index of the line of this direction passing through `pt`.
    #[inline]
    pub fn line_index(self, p: Prime, pt: Point) -> u32 {
        match self {
            Direction::Slope(m) => p.sub(pt.y, p.mul(m, pt.x)),
            Direction::Vertical => pt.x,
        }
    }

    /// Human-readable label with the slope printed as a signed residue,
    /// e.g. `(1,-1)` for `(1,p-1)`.
    pub fn label(self, p: Prime) -> String {
        match self {
            Direction::Slope(m) => format!("({},{})", 1, p.signed(m)),
            Direction::Vertical => "(0,1)".to_string(),
        }
    }

    /// Parses `(a,b)`, `a,b` or `[a,b]` with possibly negative entries.
    pub fn parse(p: Prime, s: &str) -> Result<Self> {
        let t = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']']);
        let mut it = t.split(',').map(|x| x.trim().parse::<i64>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => Direction::of_vector(p, a, b)
                .ok_or_else(|| Error::invalid(format!("zero vector is not a direction: {s}"))),
            _ => Err(Error::invalid(format!("cannot parse direction {s:?}"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.vector();
        write!(f, "({a},{b})")
    }
}

/// A subset of the plane stored as `p^2` bits indexed by [`Point::index`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    p: Prime,
    words: Vec<u64>,
    len: usize,
}

impl PointSet {
    pub fn empty(p: Prime) -> Self {
        PointSet {
            p,
            words: vec![0; p.plane_size().div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(p: Prime) -> Self {
        let mut s = PointSet::empty(p);
        for i in 0..p.plane_size() {
            s.insert_index(i);
        }
        s
    }

    pub fn from_points(p: Prime, pts: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut s = PointSet::empty(p);
        for pt in pts {
            if pt.x >= p.get() || pt.y >= p.get() {
                return Err(Error::invalid(format!("point {pt} outside F_{p}^2")));
            }
            s.insert(pt);
        }
        Ok(s)
    }

    pub fn from_fn(p: Prime, mut member: impl FnMut(Point) -> bool) -> Self {
        let mut s = PointSet::empty(p);
        for i in 0..p.plane_size() {
            if member(Point::from_index(p, i)) {
                s.insert_index(i);
            }
        }
        s
    }

    /// Builds a set from a mask with bit `i` standing for point index `i`.
    /// Only meaningful for `p <= 7`.
    pub fn from_mask(p: Prime, mask: u64) -> Self {
        assert!(p.plane_size() <= 64, "mask form needs p <= 7");
        let mut words = vec![mask];
        words.truncate(p.plane_size().div_ceil(64));
        PointSet {
            p,
            words,
            len: mask.count_ones() as usize,
        }
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.p.plane_size() <= 64).then(|| self.words[0])
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn contains(&self, pt: Point) -> bool {
        self.contains_index(pt.index(self.p))
    }

    pub fn insert_index(&mut self, i: usize) -> bool {
        let bit = 1u64 << (i % 64);
        let fresh = self.words[i / 64] & bit == 0;
        self.words[i / 64] |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn insert(&mut self, pt: Point) -> bool {
        self.insert_index(pt.index(self.p))
    }

    pub fn remove(&mut self, pt: Point) -> bool {
        let i = pt.index(self.p);
        let bit = 1u64 << (i % 64);
        let present = self.words[i / 64] & bit != 0;
        self.words[i / 64] &= !bit;
        self.len -= present as usize;
        present
    }

    /// Point indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        let p = self.p;
        self.indices().map(move |i| Point::from_index(p, i))
    }

    pub fn complement(&self) -> PointSet {
        PointSet::from_fn(self.p, |pt| !self.contains(pt))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        assert_eq!(self.p, other.p);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        PointSet {
            p: self.p,
            words,
            len,
        }
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Order by the sorted list of point indices, compared lexicographically.
    /// Shorter prefixes compare smaller.
    pub fn lex_cmp(&self, other: &PointSet) -> Ordering {
        self.indices().cmp(other.indices())
    }

    pub fn to_grid<T: Zero + One + Clone>(&self) -> Grid<T> {
        Grid::from_fn(self.p, |pt| {
            if self.contains(pt) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    pub fn profile(&self, d: Direction) -> LineProfile<i64> {
        let mut sums = vec![0i64; self.p.get() as usize];
        for pt in self.iter() {
            sums[d.line_index(self.p, pt) as usize] += 1;
        }
        LineProfile { direction: d, sums }
    }

    pub fn is_equidistributed(&self, d: Direction) -> bool {
        self.profile(d).is_constant()
    }

    pub fn special_directions(&self) -> BTreeSet<Direction> {
        Direction::all(self.p)
            .filter(|&d| !self.is_equidistributed(d))
            .collect()
    }

    /// True iff the set is a union of lines of a single direction.
    pub fn is_union_of_parallel_lines(&self) -> bool {
        Direction::all(self.p).any(|d| {
            let p = self.p.get() as i64;
            self.profile(d).sums.iter().all(|&c| c == 0 || c == p)
        })
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet(p={}, ", self.p)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

/// Canonical line of direction `d` with index `c`.
pub fn line_points(p: Prime, d: Direction, c: u32) -> PointSet {
    let c = c % p.get();
    PointSet::from_fn(p, |pt| d.line_index(p, pt) == c)
}

/// A `p x p` array of values indexed by points.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Grid<T> {
    p: Prime,
    values: Vec<T>,
}

pub type IntegerGrid = Grid<i64>;
pub type RationalGrid = Grid<Rational>;

impl<T: Clone> Grid<T> {
    pub fn filled(p: Prime, v: T) -> Self {
        Grid {
            p,
            values: vec![v; p.plane_size()],
        }
    }

    pub fn from_fn(p: Prime, mut f: impl FnMut(Point) -> T) -> Self {
        Grid {
            p,
            values: (0..p.plane_size())
                .map(|i| f(Point::from_index(p, i)))
                .collect(),
        }
    }

    /// Values in row-major order `y*p + x`.
    pub fn from_values(p: Prime, values: Vec<T>) -> Result<Self> {
        if values.len() != p.plane_size() {
            return Err(Error::Dimension(format!(
                "expected {} values for p = {p}, got {}",
                p.plane_size(),
                values.len()
            )));
        }
        Ok(Grid { p, values })
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn get(&self, pt: Point) -> &T {
        &self.values[pt.index(self.p)]
    }

    #[inline]
    pub fn at(&self, x: u32, y: u32) -> &T {
        self.get(Point::new(x, y))
    }

    pub fn set(&mut self, pt: Point, v: T) {
        let i = pt.index(self.p);
        self.values[i] = v;
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            p: self.p,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, &T)> + '_ {
        let p = self.p;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (Point::from_index(p, i), v))
    }
}

impl<T: Clone + Zero> Grid<T> {
    pub fn zeros(p: Prime) -> Self {
        Grid::filled(p, T::zero())
    }

    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Grid<T>) -> Result<Grid<T>> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        Ok(Grid {
            p: self.p,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }
}

impl IntegerGrid {
    pub fn to_rational(&self) -> RationalGrid {
        self.map(|&v| Rational::from_integer(v.into()))
    }

    /// The set of points with value 1, provided every value is 0 or 1.
    pub fn to_point_set(&self) -> Option<PointSet> {
        if self.values.iter().any(|&v| v != 0 && v != 1) {
            return None;
        }
        Some(PointSet::from_fn(self.p, |pt| *self.get(pt) == 1))
    }
}

impl RationalGrid {
    /// Integer view when every value is an integer fitting in `i64`.
    pub fn to_integer(&self) -> Option<IntegerGrid> {
        use num_traits::ToPrimitive;
        let values: Option<Vec<i64>> = self
            .values
            .iter()
            .map(|v| {
                if v.is_integer() {
                    v.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect();
        values.map(|values| Grid { p: self.p, values })
    }
}

/// Line sums of a grid along the `p` lines of one direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineProfile<T> {
    pub direction: Direction,
    pub sums: Vec<T>,
}

impl<T: PartialEq> LineProfile<T> {
    pub fn is_constant(&self) -> bool {
        self.sums.windows(2).all(|w| w[0] == w[1])
    }
}

impl<T: Clone + Zero> LineProfile<T> {
    pub fn total(&self) -> T {
        self.sums.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }
}

pub fn direction_profile<T: Clone + Zero>(f: &Grid<T>, d: Direction) -> LineProfile<T> {
    let p = f.prime();
    let mut sums = vec![T::zero(); p.get() as usize];
    for (pt, v) in f.iter() {
        let c = d.line_index(p, pt) as usize;
        sums[c] = std::mem::replace(&mut sums[c], T::zero()) + v.clone();
    }
    LineProfile { direction: d, sums }
}

pub fn is_equidistributed<T: Clone + Zero + PartialEq>(f: &Grid<T>, d: Direction) -> bool {
    direction_profile(f, d).is_constant()
}

pub fn special_directions<T: Clone + Zero + PartialEq>(f: &Grid<T>) -> BTreeSet<Direction> {
    Direction::all(f.prime())
        .filter(|&d| !is_equidistributed(f, d))
        .collect()
}

/// Directions `d(w1 - w2)` over all pairs of distinct points of `s`.
pub fn determined_directions(s: &PointSet) -> Result<BTreeSet<Direction>> {
    if s.len() < 2 {
        return Err(Error::invalid(
            "determined directions need at least two points",
        ));
    }
    let p = s.prime();
    let pts: Vec<Point> = s.iter().collect();
    let mut out = BTreeSet::new();
    for (i, &u) in pts.iter().enumerate() {
        for &v in &pts[i + 1..] {
            out.insert(Direction::through(p, u, v).expect("distinct points"));
        }
        if out.len() == p.get() as usize + 1 {
            break;
        }
    }
    Ok(out)
}

/// Lower bound `ceil((p+k+2)/(k+1))` on the number of special directions of a
/// `kp`-point set that is not a union of parallel lines.
pub fn ghidelli_bound(p: Prime, k: u32) -> u32 {
    (p.get() + k + 2).div_ceil(k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn pts(list: &[(u32, u32)]) -> BTreeSet<Point> {
        list.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn line_points_examples() {
        let p3 = pr(3);
        let h: BTreeSet<_> = line_points(p3, Direction::Slope(0), 1).iter().collect();
        assert_eq!(h, pts(&[(0, 1), (1, 1), (2, 1)]));
        let v: BTreeSet<_> = line_points(p3, Direction::Vertical, 2).iter().collect();
        assert_eq!(v, pts(&[(2, 0), (2, 1), (2, 2)]));
        let s: BTreeSet<_> = line_points(pr(5), Direction::Slope(2), 1).iter().collect();
        assert_eq!(s, pts(&[(0, 1), (1, 3), (2, 0), (3, 2), (4, 4)]));
    }

    #[test]
    fn lines_partition_the_plane() {
        for p in [pr(3), pr(5), pr(7), pr(11)] {
            for d in Direction::all(p) {
                let mut seen = PointSet::empty(p);
                for c in 0..p.get() {
                    let l = line_points(p, d, c);
                    assert_eq!(l.len(), p.get() as usize);
                    assert!(seen.is_disjoint(&l));
                    seen = seen.union(&l);
                }
                assert_eq!(seen.len(), p.plane_size());
            }
        }
    }

    #[test]
    fn vertical_line_equidistribution() {
        let p = pr(7);
        let v = line_points(p, Direction::Vertical, 3);
        assert!(v.is_equidistributed(Direction::HORIZONTAL));
        assert!(!v.is_equidistributed(Direction::Vertical));
        assert_eq!(v.special_directions(), [Direction::Vertical].into());
    }

    #[test]
    fn full_plane_has_no_special_directions() {
        let p = pr(5);
        let f: IntegerGrid = PointSet::full(p).to_grid();
        for d in Direction::all(p) {
            assert_eq!(direction_profile(&f, d).sums, vec![5; 5]);
        }
        assert!(special_directions(&f).is_empty());
    }

    #[test]
    fn direction_of_vector_is_canonical() {
        let p = pr(5);
        assert_eq!(Direction::of_vector(p, 2, 4), Some(Direction::Slope(2)));
        assert_eq!(Direction::of_vector(p, 0, 3), Some(Direction::Vertical));
        assert_eq!(Direction::of_vector(p, -1, 1), Some(Direction::Slope(4)));
        assert_eq!(Direction::of_vector(p, 5, 10), None);
        assert_eq!(Direction::Slope(4).label(p), "(1,-1)");
        assert_eq!(Direction::parse(p, "(1,-1)").unwrap(), Direction::Slope(4));
        assert_eq!(Direction::parse(p, "0,2").unwrap(), Direction::Vertical);
        assert!(Direction::parse(p, "(0,0)").is_err());
    }

    #[test]
    fn determined_directions_examples() {
        let p = pr(5);
        let two = PointSet::from_points(p, [Point::new(0, 0), Point::new(1, 1)]).unwrap();
        assert_eq!(
            determined_directions(&two).unwrap(),
            [Direction::Slope(1)].into()
        );
        let one = PointSet::from_points(p, [Point::new(0, 0)]).unwrap();
        assert!(determined_directions(&one).is_err());
    }

    #[test]
    fn ghidelli_values() {
        assert_eq!(ghidelli_bound(pr(7), 2), 4);
        assert_eq!(ghidelli_bound(pr(5), 1), 4);
        assert_eq!(ghidelli_bound(pr(11), 3), 4);
        assert_eq!(ghidelli_bound(pr(13), 4), 4);
        assert_eq!(ghidelli_bound(pr(11), 5), 3);
    }

    #[test]
    fn lex_order_prefers_small_indices() {
        let p = pr(3);
        let a = PointSet::from_points(p, [Point::new(0, 0)]).unwrap();
        let b = PointSet::from_points(p, [Point::new(2, 2)]).unwrap();
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
    }
}
