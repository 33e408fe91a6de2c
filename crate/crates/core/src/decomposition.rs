//! Exact decomposition of a rational function on the plane into a weighted
//! sum of lines, one direction at a time.
//!
//! Peeling direction `d` subtracts the grid that spreads each `d`-line sum
//! uniformly over its line. The peeled function has zero `d`-profile and keeps
//! its equidistribution elsewhere, so after every special direction has been
//! peeled all line sums vanish and the residual must be the zero grid.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::format::{format_rational, parse_rational};
use crate::plane::{
    direction_profile, special_directions, Direction, LineProfile, Point, RationalGrid,
};
use crate::Rational;

/// Weights `c_{d,i}` on the lines of an ordered list of directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineWeighting {
    p: Prime,
    order: Vec<Direction>,
    weights: BTreeMap<Direction, Vec<Rational>>,
}

impl LineWeighting {
    pub fn new(p: Prime, order: Vec<Direction>) -> Self {
        let weights = order
            .iter()
            .map(|&d| (d, vec![Rational::zero(); p.get() as usize]))
            .collect();
        LineWeighting { p, order, weights }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn order(&self) -> &[Direction] {
        &self.order
    }

    pub fn weights(&self, d: Direction) -> Option<&[Rational]> {
        self.weights.get(&d).map(Vec::as_slice)
    }

    pub fn weight(&self, d: Direction, c: u32) -> Rational {
        self.weights
            .get(&d)
            .map_or_else(Rational::zero, |w| w[c as usize].clone())
    }

    pub fn set_weight(&mut self, d: Direction, c: u32, v: Rational) -> Result<()> {
        let w = self
            .weights
            .get_mut(&d)
            .ok_or_else(|| Error::invalid(format!("direction {d} is not in the weighting")))?;
        w[c as usize] = v;
        Ok(())
    }

    pub fn add_weight(&mut self, d: Direction, c: u32, v: &Rational) -> Result<()> {
        let cur = self.weight(d, c);
        self.set_weight(d, c, cur + v)
    }

    /// Directions carrying at least one nonzero weight.
    pub fn support(&self) -> Vec<Direction> {
        self.order
            .iter()
            .copied()
            .filter(|d| self.weights[d].iter().any(|w| !w.is_zero()))
            .collect()
    }

    /// Adds `kappa` to every weight of direction `d`.
    pub fn shift_gauge(&mut self, d: Direction, kappa: &Rational) -> Result<()> {
        for c in 0..self.p.get() {
            self.add_weight(d, c, kappa)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let p = self.p;
        let weights: Map<String, Value> = self
            .order
            .iter()
            .map(|d| {
                let row: Map<String, Value> = self.weights[d]
                    .iter()
                    .enumerate()
                    .map(|(c, w)| (c.to_string(), Value::String(format_rational(w))))
                    .collect();
                (d.label(p), Value::Object(row))
            })
            .collect();
        json!({
            "p": p.get(),
            "order": self.order.iter().map(|d| d.label(p)).collect::<Vec<_>>(),
            "weights": weights,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invalid("weighting: missing integer field \"p\""))?;
        let p = Prime::new(u32::try_from(p).map_err(|_| Error::InvalidPrime(p))?)?;
        let order = v
            .get("order")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("weighting: missing array field \"order\""))?
            .iter()
            .map(|d| {
                d.as_str()
                    .ok_or_else(|| Error::invalid("weighting: directions are strings"))
                    .and_then(|s| Direction::parse(p, s))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = LineWeighting::new(p, order);
        if out.weights.len() != out.order.len() {
            return Err(Error::invalid("weighting: repeated direction in \"order\""));
        }
        let weights = v
            .get("weights")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::invalid("weighting: missing object field \"weights\""))?;
        for (dk, row) in weights {
            let d = Direction::parse(p, dk)?;
            let row = row
                .as_object()
                .ok_or_else(|| Error::invalid("weighting: each direction maps to an object"))?;
            for (ck, w) in row {
                let c: u32 =
                    ck.parse().ok().filter(|&c| c < p.get()).ok_or_else(|| {
                        Error::invalid(format!("weighting: bad line index {ck:?}"))
                    })?;
                let w = match w {
                    Value::String(s) => parse_rational(s)
                        .ok_or_else(|| Error::invalid(format!("weighting: bad rational {s:?}")))?,
                    Value::Number(n) => n
                        .as_i64()
                        .map(|n| Rational::from_integer(n.into()))
                        .ok_or_else(|| Error::invalid("weighting: non-integer number"))?,
                    _ => return Err(Error::invalid("weighting: weights are strings or integers")),
                };
                out.set_weight(d, c, w)?;
            }
        }
        Ok(out)
    }
}

/// Every point of line `c` gets `profile[c] / p`.
pub fn uniform_spread(p: Prime, profile: &LineProfile<Rational>) -> RationalGrid {
    let q = Rational::from_integer(p.get().into());
    let spread: Vec<Rational> = profile.sums.iter().map(|s| s / &q).collect();
    RationalGrid::from_fn(p, |pt| {
        spread[profile.direction.line_index(p, pt) as usize].clone()
    })
}

/// Peels the given directions in order and checks that nothing is left.
pub fn decompose_along(f: &RationalGrid, order: &[Direction]) -> Result<LineWeighting> {
    let p = f.prime();
    let mut out = LineWeighting::new(p, order.to_vec());
    if out.weights.len() != order.len() {
        return Err(Error::invalid("repeated direction in peeling order"));
    }
    let q = Rational::from_integer(p.get().into());
    let mut residual = f.clone();
    for &d in order {
        let profile = direction_profile(&residual, d);
        let spread = uniform_spread(p, &profile);
        for (c, s) in profile.sums.iter().enumerate() {
            out.set_weight(d, c as u32, s / &q)?;
        }
        residual = RationalGrid::from_fn(p, |pt| residual.get(pt) - spread.get(pt));
    }
    if let Some((pt, _)) = residual.iter().find(|(_, v)| !v.is_zero()) {
        return Err(Error::NonzeroResidual {
            peeled: order.len(),
            x: pt.x,
            y: pt.y,
        });
    }
    Ok(out)
}

/// Peeling order used by [`decompose`]: the special directions in canonical
/// order (slopes by `m`, vertical last), or just the vertical direction for a
/// constant grid.
pub fn peeling_order(f: &RationalGrid) -> Vec<Direction> {
    let special: Vec<Direction> = special_directions(f).into_iter().collect();
    if special.is_empty() {
        vec![Direction::Vertical]
    } else {
        special
    }
}

pub fn decompose(f: &RationalGrid) -> Result<LineWeighting> {
    decompose_along(f, &peeling_order(f))
}

pub fn reconstruct(w: &LineWeighting) -> RationalGrid {
    let p = w.p;
    RationalGrid::from_fn(p, |pt| {
        w.order.iter().fold(Rational::zero(), |acc, &d| {
            acc + &w.weights[&d][d.line_index(p, pt) as usize]
        })
    })
}

/// Explicit three-direction weighting of the triangle `{(a,b) : b < a}`.
#[derive(Clone, Debug)]
pub struct TriangleWeights {
    pub weighting: LineWeighting,
    /// Sign flips `(vertical, horizontal, diagonal)` applied relative to the
    /// transcribed weights `c/p` on `x=c`, `-c/p` on `y=c`, `c/p` on `y=x+c`.
    pub sign_flips: (bool, bool, bool),
}

impl TriangleWeights {
    pub fn corrected(&self) -> bool {
        self.sign_flips != (false, false, false)
    }
}

fn triangle_weighting(p: Prime, flips: (bool, bool, bool)) -> LineWeighting {
    let order = vec![
        Direction::HORIZONTAL,
        Direction::Slope(1),
        Direction::Vertical,
    ];
    let mut w = LineWeighting::new(p, order);
    let q = p.get() as i64;
    let sign = |f: bool| if f { -1 } else { 1 };
    for c in 0..p.get() {
        let ci = c as i64;
        let r = |num: i64| Rational::new(num.into(), q.into());
        w.set_weight(Direction::Vertical, c, r(sign(flips.0) * ci))
            .unwrap();
        w.set_weight(Direction::HORIZONTAL, c, r(-sign(flips.1) * ci))
            .unwrap();
        w.set_weight(Direction::Slope(1), c, r(sign(flips.2) * ci))
            .unwrap();
    }
    w
}

/// The transcribed weights, with the first sign pattern (in a fixed search
/// order starting from no flips) whose reconstruction is exactly the triangle
/// indicator.
pub fn triangle_explicit_weights(p: Prime) -> TriangleWeights {
    let target = RationalGrid::from_fn(p, |pt: Point| {
        if pt.y < pt.x {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    (0..8u8)
        .map(|bits| (bits & 1 != 0, bits & 2 != 0, bits & 4 != 0))
        .map(|flips| TriangleWeights {
            weighting: triangle_weighting(p, flips),
            sign_flips: flips,
        })
        .find(|t| reconstruct(&t.weighting) == target)
        .expect("some sign pattern reproduces the triangle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{line_points, PointSet};

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn spread_examples() {
        let p = pr(5);
        let mut sums = vec![q(0, 1); 5];
        sums[0] = q(5, 1);
        let g = uniform_spread(
            p,
            &LineProfile {
                direction: Direction::Vertical,
                sums,
            },
        );
        for (pt, v) in g.iter() {
            assert_eq!(*v, if pt.x == 0 { q(1, 1) } else { q(0, 1) });
        }
        let flat = LineProfile {
            direction: Direction::Slope(2),
            sums: vec![q(3, 1); 5],
        };
        assert!(uniform_spread(p, &flat)
            .values()
            .iter()
            .all(|v| *v == q(3, 5)));
        let tri = LineProfile {
            direction: Direction::Vertical,
            sums: (0..5).map(|a| q(a, 1)).collect(),
        };
        let g = uniform_spread(p, &tri);
        assert_eq!(g.total(), q(10, 1));
        assert_eq!(*g.at(3, 1), q(3, 5));
    }

    #[test]
    fn single_weighted_line() {
        let p = pr(7);
        let f = line_points(p, Direction::Vertical, 2)
            .to_grid::<Rational>()
            .map(|v| v * q(3, 1));
        let w = decompose(&f).unwrap();
        assert_eq!(w.order(), &[Direction::Vertical]);
        for c in 0..7 {
            assert_eq!(
                w.weight(Direction::Vertical, c),
                if c == 2 { q(3, 1) } else { q(0, 1) }
            );
        }
        assert_eq!(reconstruct(&w), f);
    }

    #[test]
    fn triangle_support() {
        let p = pr(11);
        let f: RationalGrid = PointSet::from_fn(p, |pt| pt.y < pt.x).to_grid();
        let w = decompose(&f).unwrap();
        assert_eq!(
            w.support(),
            vec![
                Direction::HORIZONTAL,
                Direction::Slope(1),
                Direction::Vertical
            ]
        );
        assert_eq!(reconstruct(&w), f);
    }

    #[test]
    fn constant_grid_convention() {
        let p = pr(5);
        let f = RationalGrid::filled(p, q(2, 3));
        let w = decompose(&f).unwrap();
        assert_eq!(w.order(), &[Direction::Vertical]);
        assert!(w
            .weights(Direction::Vertical)
            .unwrap()
            .iter()
            .all(|x| *x == q(2, 3)));
        assert_eq!(reconstruct(&w), f);
    }

    #[test]
    fn empty_and_vertical_reconstructions() {
        let p = pr(5);
        assert!(reconstruct(&LineWeighting::new(p, vec![])).is_zero());
        let mut w = LineWeighting::new(p, vec![Direction::Vertical]);
        w.shift_gauge(Direction::Vertical, &q(1, 1)).unwrap();
        assert!(reconstruct(&w).values().iter().all(|v| *v == q(1, 1)));
    }

    #[test]
    fn residual_error_for_missing_direction() {
        let p = pr(5);
        let f: RationalGrid = PointSet::from_fn(p, |pt| pt.y < pt.x).to_grid();
        let err = decompose_along(&f, &[Direction::Vertical, Direction::HORIZONTAL]).unwrap_err();
        assert!(matches!(err, Error::NonzeroResidual { peeled: 2, .. }));
    }

    #[test]
    fn printed_triangle_weights_need_no_correction() {
        for p in [3, 5, 7, 11, 13] {
            let p = pr(p);
            let t = triangle_explicit_weights(p);
            assert!(!t.corrected());
            let f = reconstruct(&t.weighting);
            let tri: RationalGrid = PointSet::from_fn(p, |pt| pt.y < pt.x).to_grid();
            assert_eq!(f, tri);
            let vert = direction_profile(&f, Direction::Vertical);
            assert_eq!(
                vert.sums,
                (0..p.get() as i64).map(|a| q(a, 1)).collect::<Vec<_>>()
            );
        }
        let f = reconstruct(&triangle_explicit_weights(pr(3)).weighting);
        assert_eq!(f.total(), q(3, 1));
    }

    #[test]
    fn json_round_trip() {
        let p = pr(5);
        let t = triangle_explicit_weights(p).weighting;
        let v = t.to_json();
        assert_eq!(v["order"][0], "(1,0)");
        assert_eq!(v["weights"]["(0,1)"]["3"], "3/5");
        let back = LineWeighting::from_json(&v).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json().to_string(), v.to_string());
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(LineWeighting::from_json(&json!({"p": 4, "order": [], "weights": {}})).is_err());
        assert!(LineWeighting::from_json(
            &json!({"p": 5, "order": ["(1,0)"], "weights": {"(1,0)": {"9": "1"}}})
        )
        .is_err());
        assert!(LineWeighting::from_json(
            &json!({"p": 5, "order": ["(1,0)"], "weights": {"(0,1)": {"0": "1"}}})
        )
        .is_err());
        assert!(LineWeighting::from_json(
            &json!({"p": 5, "order": ["(1,0)"], "weights": {"(1,0)": {"0": "1/0"}}})
        )
        .is_err());
    }
}
