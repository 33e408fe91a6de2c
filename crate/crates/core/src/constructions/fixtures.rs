//! Matrices and sets transcribed from the reference figures.
//!
//! Files are stored in figure layout: the first text row is the top row of
//! the picture, i.e. `y = p - 1`.

use std::collections::BTreeSet;

use super::pipeline::{PipelineParams, RowPairing, SignedMatrix};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::format::parse_integer_grid;
use crate::plane::{Direction, IntegerGrid};

const TRIANGLE_P11: &str = include_str!("../../data/fig_triangle_p11.txt");
const UPPER_TRIANGLE_P11: &str = include_str!("../../data/fig_upper_triangle_p11.txt");
const M11_PRINTED: &str = include_str!("../../data/fig_m11_printed.txt");
const N11: &str = include_str!("../../data/fig_n11.txt");
const N11_PAIRING: &str = include_str!("../../data/fig_n11_pairing.txt");
const SET_P5: &str = include_str!("../../data/fig_set_p5.txt");
const SET_P7: &str = include_str!("../../data/fig_set_p7.txt");
const SET_P11: &str = include_str!("../../data/fig_set_p11.txt");
const P13_PRINTED: &str = include_str!("../../data/fig_p13_printed.txt");
const P13_COMPLETION: &str = include_str!("../../data/fig_p13_completion.txt");
const P13_SET: &str = include_str!("../../data/fig_p13_set.txt");

/// Rows of whitespace-separated integers, `#` comments skipped. Unlike the
/// grid parsers this accepts non-square data.
pub fn parse_raw_rows(text: &str) -> Result<Vec<Vec<i64>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(ln, l)| {
            l.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line: ln + 1,
                        column: 1,
                        message: format!("bad integer `{t}`"),
                    })
                })
                .collect()
        })
        .collect()
}

fn matrix(text: &str) -> SignedMatrix {
    SignedMatrix::from_rows(parse_raw_rows(text).expect("fixture parses"))
        .expect("fixture is square")
}

fn grid(text: &str) -> IntegerGrid {
    parse_integer_grid(text).expect("fixture parses")
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub grid: IntegerGrid,
    pub special: BTreeSet<Direction>,
}

fn four(p: Prime) -> BTreeSet<Direction> {
    super::pipeline::four_directions(p)
}

/// Four-direction example for `p` in `{5, 7, 11, 13}`.
///
/// For `p = 13` the printed data is incomplete; the fixture is
/// [`p13_completion`].
pub fn figure_fixture(p: u32) -> Result<Fixture> {
    let prime = Prime::new(p)?;
    let (name, grid) = match p {
        5 => ("plus5", grid(SET_P5)),
        7 => ("fig7", grid(SET_P7)),
        11 => ("fig11", grid(SET_P11)),
        13 => ("fig13", p13_completion()),
        _ => return Err(Error::invalid(format!("no figure fixture for p = {p}"))),
    };
    Ok(Fixture {
        name,
        grid,
        special: four(prime),
    })
}

pub fn triangle_p11() -> IntegerGrid {
    grid(TRIANGLE_P11)
}

pub fn upper_triangle_p11() -> IntegerGrid {
    grid(UPPER_TRIANGLE_P11)
}

/// `M11` exactly as printed, including its two sign errors.
pub fn m11_printed() -> SignedMatrix {
    matrix(M11_PRINTED)
}

pub fn n11_printed() -> SignedMatrix {
    matrix(N11)
}

/// Colour pairing of `N11`.
pub fn n11_pairing() -> RowPairing {
    RowPairing::parse(Prime::new(11).unwrap(), N11_PAIRING).expect("fixture parses")
}

/// The 12 printed rows of the `p = 13` example.
pub fn p13_printed_rows() -> Vec<Vec<i64>> {
    parse_raw_rows(P13_PRINTED).expect("fixture parses")
}

/// Nonnegative integer grid of total 65 with special directions exactly
/// `(1,0), (0,1), (1,1), (1,-1)` and two entries equal to 2, produced by the
/// pipeline with [`p13_completion_params`] and minimal overlapping pairings.
///
/// The printed rows cannot be completed: every direction is special for them
/// wherever a thirteenth row is inserted. This grid shares their visible
/// features (both 2s in column 5, column 2 empty).
pub fn p13_completion() -> IntegerGrid {
    grid(P13_COMPLETION)
}

pub fn p13_completion_params() -> PipelineParams {
    PipelineParams {
        shift: 6,
        plus_columns: vec![7],
        minus_columns: vec![12],
        k: 9,
    }
}

/// A 65-point set with the same four special directions, produced by the
/// pipeline with [`p13_set_params`] and disjoint progressions.
pub fn p13_set() -> IntegerGrid {
    grid(P13_SET)
}

pub fn p13_set_params() -> PipelineParams {
    PipelineParams {
        shift: 5,
        plus_columns: vec![6],
        minus_columns: vec![12],
        k: 10,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::pipeline::{build_n11, run_pipeline, PairingStrategy};
    use crate::plane::special_directions;

    #[test]
    fn printed_m11_has_two_sign_errors() {
        let diff = m11_printed().diff(&crate::constructions::pipeline::build_m11());
        assert_eq!(diff, vec![(4, 3, 1, -1), (5, 4, 1, -1)]);
        assert!(m11_printed().row_sums().iter().any(|&s| s != 0));
    }

    #[test]
    fn triangle_figures_match_the_constructions() {
        use crate::constructions::{triangle_set, TriangleVariant};
        use crate::plane::Direction;
        let p = Prime::new(11).unwrap();
        let lower = triangle_set(p, TriangleVariant::Lower);
        let upper = triangle_set(p, TriangleVariant::Upper);
        assert_eq!(triangle_p11(), lower.to_grid());
        assert_eq!(upper_triangle_p11(), upper.to_grid());
        let h = Direction::HORIZONTAL;
        let v = Direction::Vertical;
        assert_eq!(
            lower.special_directions(),
            [h, v, Direction::Slope(1)].into()
        );
        assert_eq!(
            upper.special_directions(),
            [h, v, Direction::Slope(10)].into()
        );
    }

    #[test]
    fn n11_matches_figure() {
        assert_eq!(build_n11(), n11_printed());
        n11_pairing().validate(&n11_printed()).unwrap();
    }

    #[test]
    fn printed_p13_rows() {
        let rows = p13_printed_rows();
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.len() == 13));
        assert_eq!(rows.iter().flatten().sum::<i64>(), 65);
        assert_eq!(rows.iter().flatten().filter(|&&v| v == 2).count(), 2);
    }

    #[test]
    fn p13_fixtures_regenerate() {
        let p = Prime::new(13).unwrap();
        let multi = run_pipeline(
            p,
            &p13_completion_params(),
            &PairingStrategy::Minimal {
                allow_overlap: true,
            },
        )
        .unwrap()
        .unwrap();
        assert_eq!(multi.grid, p13_completion());
        let set = run_pipeline(
            p,
            &p13_set_params(),
            &PairingStrategy::Minimal {
                allow_overlap: false,
            },
        )
        .unwrap()
        .unwrap();
        assert_eq!(set.grid, p13_set());
    }

    #[test]
    fn p13_fixtures_have_four_directions() {
        let p = Prime::new(13).unwrap();
        for g in [p13_completion(), p13_set()] {
            assert_eq!(g.total(), 65);
            assert_eq!(special_directions(&g), four(p));
        }
        assert_eq!(
            p13_completion()
                .values()
                .iter()
                .filter(|&&v| v == 2)
                .count(),
            2
        );
        assert!(p13_set().to_point_set().is_some());
    }
}
