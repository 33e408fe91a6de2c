//! Row-wise `L_k` pipeline turning zero-row-sum signed matrices into sets
//! with four special directions.
//!
//! A row whose entries sum to zero is a sum of vectors `e^(P) - e^(N)`, one
//! per pair of a `+1` position `P` with a `-1` position `N`. Applying `L_k`
//! to such a pair and adding `l/p` times the all-ones row, where
//! `k*l = N - P mod p`, gives the progression `P, P+k, ..., P+(l-1)k`. The
//! pairing only affects the background `l/p`, so it decides whether the
//! progressions of one row overlap.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::operators::{l_operator, progression_length, RowVector};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::format::{grid_from_matrix, grid_to_matrix};
use crate::plane::{special_directions, Direction, IntegerGrid, RationalGrid};
use crate::Rational;

/// `p x p` integer matrix in figure layout (row 0 on top).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignedMatrix {
    #[serde(skip)]
    p: Prime,
    rows: Vec<Vec<i64>>,
}

impl SignedMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let g = grid_from_matrix(&rows)?;
        Ok(SignedMatrix { p: g.prime(), rows })
    }

    pub fn zeros(p: Prime) -> Self {
        let q = p.get() as usize;
        SignedMatrix {
            p,
            rows: vec![vec![0; q]; q],
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn add(&self, other: &SignedMatrix) -> SignedMatrix {
        assert_eq!(self.p, other.p);
        SignedMatrix {
            p: self.p,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    /// `M^(k)(i,j) = M(i, j-k)`.
    pub fn shift_columns(&self, k: i64) -> SignedMatrix {
        let p = self.p;
        SignedMatrix {
            p,
            rows: self
                .rows
                .iter()
                .map(|r| {
                    (0..p.get() as i64)
                        .map(|j| r[p.reduce(j - k) as usize])
                        .collect()
                })
                .collect(),
        }
    }

    /// Entries differing from `other` as `(row, column, self, other)`.
    pub fn diff(&self, other: &SignedMatrix) -> Vec<(usize, usize, i64, i64)> {
        let mut out = Vec::new();
        for (r, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            for (c, (x, y)) in a.iter().zip(b).enumerate() {
                if x != y {
                    out.push((r, c, *x, *y));
                }
            }
        }
        out
    }

    pub fn to_grid(&self) -> IntegerGrid {
        grid_from_matrix(&self.rows).expect("square prime-sized matrix")
    }

    pub fn from_grid(g: &IntegerGrid) -> Self {
        SignedMatrix {
            p: g.prime(),
            rows: grid_to_matrix(g),
        }
    }
}

/// Lower triangle indicator minus upper triangle indicator, in figure layout:
/// row `r` has `+1` in its last `r` columns and `-1` in columns `1..=r`.
pub fn triangle_difference(p: Prime) -> SignedMatrix {
    let q = p.get() as usize;
    let rows = (0..q)
        .map(|r| {
            (0..q)
                .map(|c| {
                    let lower = (r > 0 && c >= q - r) as i64;
                    let upper = (1..=r).contains(&c) as i64;
                    lower - upper
                })
                .collect()
        })
        .collect();
    SignedMatrix { p, rows }
}

/// Constant `+1` columns at `plus` and `-1` columns at `minus` (0-indexed).
pub fn correction_columns(p: Prime, plus: &[usize], minus: &[usize]) -> SignedMatrix {
    let mut row = vec![0i64; p.get() as usize];
    for &c in plus {
        row[c] += 1;
    }
    for &c in minus {
        row[c] -= 1;
    }
    SignedMatrix {
        p,
        rows: vec![row; p.get() as usize],
    }
}

fn p11() -> Prime {
    Prime::new(11).unwrap()
}

pub fn build_m11() -> SignedMatrix {
    triangle_difference(p11())
}

/// Constant `+1` in the second and seventh columns, `-1` in the fifth and
/// last.
pub fn build_c11() -> SignedMatrix {
    correction_columns(p11(), &[1, 6], &[4, 10])
}

/// `M11 + M11^(5) + C11`.
pub fn build_n11() -> SignedMatrix {
    let m = build_m11();
    m.add(&m.shift_columns(5)).add(&build_c11())
}

/// Per row, pairs `(plus column, minus column)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RowPairing {
    pub rows: Vec<Vec<(usize, usize)>>,
}

impl RowPairing {
    /// Checks that every row's pairs use each `+1` and `-1` of `m` exactly once
    /// (with multiplicity for larger entries).
    pub fn validate(&self, m: &SignedMatrix) -> Result<()> {
        let q = m.p.get() as usize;
        if self.rows.len() != q {
            return Err(Error::Dimension(format!(
                "pairing has {} rows, expected {q}",
                self.rows.len()
            )));
        }
        for (r, (pairs, row)) in self.rows.iter().zip(&m.rows).enumerate() {
            let mut acc = vec![0i64; q];
            for &(pos, neg) in pairs {
                if pos >= q || neg >= q || pos == neg {
                    return Err(Error::InvalidPairing {
                        row: r,
                        message: format!("bad pair ({pos},{neg})"),
                    });
                }
                acc[pos] += 1;
                acc[neg] -= 1;
            }
            let pos_used: i64 = pairs.len() as i64;
            let pos_needed: i64 = row.iter().filter(|&&v| v > 0).sum();
            if acc != *row || pos_used != pos_needed {
                return Err(Error::InvalidPairing {
                    row: r,
                    message: "pairs do not match the row's +1 and -1 entries".into(),
                });
            }
        }
        Ok(())
    }

    pub fn parse(p: Prime, text: &str) -> Result<Self> {
        let q = p.get() as usize;
        let mut rows = vec![Vec::new(); q];
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: &str| Error::Parse {
                line: ln + 1,
                column: 1,
                message: m.to_string(),
            };
            let (r, rest) = line
                .split_once(':')
                .ok_or_else(|| err("expected `row: pairs`"))?;
            let r: usize = r.trim().parse().map_err(|_| err("bad row index"))?;
            if r >= q {
                return Err(err("row index out of range"));
            }
            for pair in rest.split_whitespace() {
                let (a, b) = pair
                    .split_once('-')
                    .ok_or_else(|| err("expected `plus-minus`"))?;
                let a = a.parse().map_err(|_| err("bad column"))?;
                let b = b.parse().map_err(|_| err("bad column"))?;
                rows[r].push((a, b));
            }
        }
        Ok(RowPairing { rows })
    }
}

/// Background `sum_a l_a / p` of each row under a pairing and multiplier `k`.
pub fn pairing_background(m: &SignedMatrix, k: i64, pairing: &RowPairing) -> Result<Vec<Rational>> {
    pairing.validate(m)?;
    let p = m.p;
    pairing
        .rows
        .iter()
        .map(|pairs| {
            let total = pairs.iter().try_fold(0u64, |acc, &(pos, neg)| {
                progression_length(p, neg as i64 - pos as i64, k)
                    .map(|l| acc + l as u64)
                    .ok_or_else(|| Error::invalid("k must be nonzero mod p"))
            })?;
            Ok(Rational::new(total.into(), p.get().into()))
        })
        .collect()
}

/// `L_k(row) + background[row] * 1` for every row of `m`, as a grid.
///
/// Fails on the first entry that is negative or not an integer.
pub fn apply_l_rowwise(
    m: &SignedMatrix,
    k: i64,
    pairing: &RowPairing,
    background: &[Rational],
) -> Result<RationalGrid> {
    pairing.validate(m)?;
    let p = m.p;
    if background.len() != p.get() as usize {
        return Err(Error::Dimension(format!(
            "{} background values",
            background.len()
        )));
    }
    let mut out_rows = Vec::with_capacity(p.get() as usize);
    for (r, row) in m.rows.iter().enumerate() {
        let v = RowVector::from_integers(p, row)?;
        let lv = l_operator(k, &v)?;
        let vals: Vec<Rational> = lv.entries().iter().map(|e| e + &background[r]).collect();
        if let Some((c, bad)) = vals
            .iter()
            .enumerate()
            .find(|(_, e)| !e.is_integer() || *e < &Rational::from_integer(0.into()))
        {
            return Err(Error::InadmissibleRow {
                row: r,
                column: c,
                value: crate::format::format_rational(bad),
            });
        }
        out_rows.push(vals);
    }
    grid_from_matrix(&out_rows)
}

/// Sum of the progressions `P, P+k, ..., P+(l-1)k` of every pair, per row.
/// Computed without the operator; used as an independent route.
pub fn progression_rows(m: &SignedMatrix, k: i64, pairing: &RowPairing) -> Result<Vec<Vec<i64>>> {
    pairing.validate(m)?;
    let p = m.p;
    let q = p.get() as usize;
    pairing
        .rows
        .iter()
        .map(|pairs| {
            let mut row = vec![0i64; q];
            for &(pos, neg) in pairs {
                let l = progression_length(p, neg as i64 - pos as i64, k)
                    .ok_or_else(|| Error::invalid("k must be nonzero mod p"))?;
                for a in 0..l as i64 {
                    row[p.reduce(pos as i64 + a * k) as usize] += 1;
                }
            }
            Ok(row)
        })
        .collect()
}

const ROW_SEARCH_NODES: usize = 200_000;

/// Pairing of one zero-sum row with the smallest total progression length.
/// With `allow_overlap = false` the progressions must be disjoint. Ties go to
/// the lexicographically first assignment of minus positions.
pub fn min_pairing_row(
    p: Prime,
    row: &[i64],
    k: i64,
    allow_overlap: bool,
) -> Option<Vec<(usize, usize)>> {
    let expand = |sign: i64| -> Vec<usize> {
        row.iter()
            .enumerate()
            .flat_map(|(c, &v)| std::iter::repeat_n(c, (v * sign).max(0) as usize))
            .collect()
    };
    let (plus, minus) = (expand(1), expand(-1));
    if plus.len() != minus.len() {
        return None;
    }
    struct Ctx<'a> {
        p: Prime,
        k: i64,
        allow_overlap: bool,
        plus: &'a [usize],
        minus: &'a [usize],
        used: Vec<bool>,
        cover: Vec<u32>,
        current: Vec<(usize, usize)>,
        best: Option<(u64, Vec<(usize, usize)>)>,
        nodes: usize,
    }
    fn go(ctx: &mut Ctx<'_>, i: usize, cost: u64) {
        ctx.nodes += 1;
        if ctx.nodes > ROW_SEARCH_NODES {
            return;
        }
        if ctx.best.as_ref().is_some_and(|(b, _)| cost >= *b) {
            return;
        }
        if i == ctx.plus.len() {
            ctx.best = Some((cost, ctx.current.clone()));
            return;
        }
        let pos = ctx.plus[i];
        for j in 0..ctx.minus.len() {
            if ctx.used[j] || (j > 0 && ctx.minus[j] == ctx.minus[j - 1] && !ctx.used[j - 1]) {
                continue;
            }
            let neg = ctx.minus[j];
            let l = progression_length(ctx.p, neg as i64 - pos as i64, ctx.k).unwrap();
            let cells: Vec<usize> = (0..l as i64)
                .map(|a| ctx.p.reduce(pos as i64 + a * ctx.k) as usize)
                .collect();
            if !ctx.allow_overlap && cells.iter().any(|&c| ctx.cover[c] > 0) {
                continue;
            }
            for &c in &cells {
                ctx.cover[c] += 1;
            }
            ctx.used[j] = true;
            ctx.current.push((pos, neg));
            go(ctx, i + 1, cost + l as u64);
            ctx.current.pop();
            ctx.used[j] = false;
            for &c in &cells {
                ctx.cover[c] -= 1;
            }
        }
    }
    let mut ctx = Ctx {
        p,
        k,
        allow_overlap,
        plus: &plus,
        minus: &minus,
        used: vec![false; minus.len()],
        cover: vec![0; p.get() as usize],
        current: Vec::new(),
        best: None,
        nodes: 0,
    };
    go(&mut ctx, 0, 0);
    ctx.best.map(|(_, pairs)| pairs)
}

/// Minimal pairing of every row, or `None` if some row has none.
pub fn min_pairing(m: &SignedMatrix, k: i64, allow_overlap: bool) -> Option<RowPairing> {
    let rows = m
        .rows
        .iter()
        .map(|row| min_pairing_row(m.p, row, k, allow_overlap))
        .collect::<Option<Vec<_>>>()?;
    Some(RowPairing { rows })
}

/// One point of the parameter menu of the pipeline
/// `N = M + M^(shift) + C`, `L_k` row-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PipelineParams {
    pub shift: u32,
    pub plus_columns: Vec<usize>,
    pub minus_columns: Vec<usize>,
    pub k: u32,
}

impl PipelineParams {
    /// Shift 5, corrections `+{1,6} -{4,10}`, `k = -2`.
    pub fn figure_p11() -> Self {
        PipelineParams {
            shift: 5,
            plus_columns: vec![1, 6],
            minus_columns: vec![4, 10],
            k: 9,
        }
    }

    pub fn matrix(&self, p: Prime) -> SignedMatrix {
        let m = triangle_difference(p);
        m.add(&m.shift_columns(self.shift as i64))
            .add(&correction_columns(
                p,
                &self.plus_columns,
                &self.minus_columns,
            ))
    }
}

#[derive(Clone, Debug)]
pub enum PairingStrategy {
    Transcribed(RowPairing),
    /// Row-wise minimal pairings; `allow_overlap` admits multiset output.
    Minimal {
        allow_overlap: bool,
    },
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub params: PipelineParams,
    pub pairing: RowPairing,
    pub grid: IntegerGrid,
    pub special: BTreeSet<Direction>,
}

/// Runs one parameter point. `Ok(None)` when no admissible pairing exists.
///
/// The output is assembled from the progressions directly; it equals
/// [`apply_l_rowwise`] with the matching background.
pub fn run_pipeline(
    p: Prime,
    params: &PipelineParams,
    strategy: &PairingStrategy,
) -> Result<Option<PipelineOutput>> {
    let n = params.matrix(p);
    if n.row_sums().iter().any(|&s| s != 0) {
        return Err(Error::invalid("pipeline matrix has a nonzero row sum"));
    }
    let k = params.k as i64;
    let pairing = match strategy {
        PairingStrategy::Transcribed(pairing) => pairing.clone(),
        PairingStrategy::Minimal { allow_overlap } => match min_pairing(&n, k, *allow_overlap) {
            Some(pairing) => pairing,
            None => return Ok(None),
        },
    };
    let grid = grid_from_matrix(&progression_rows(&n, k, &pairing)?)?;
    let special = special_directions(&grid);
    Ok(Some(PipelineOutput {
        params: params.clone(),
        pairing,
        grid,
        special,
    }))
}

/// The four directions `(1,0), (0,1), (1,1), (1,-1)`.
pub fn four_directions(p: Prime) -> BTreeSet<Direction> {
    [
        Direction::HORIZONTAL,
        Direction::Vertical,
        Direction::Slope(1),
        Direction::Slope(p.get() - 1),
    ]
    .into()
}

/// Which parameter points [`four_direction_search`] visits.
#[derive(Clone, Debug)]
pub enum ParamMenu {
    Fixed(Vec<PipelineParams>),
    /// All shifts, all `k`, and correction columns with up to
    /// `max_correction_pairs` `(+,-)` column pairs.
    Sweep {
        max_correction_pairs: usize,
    },
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

impl ParamMenu {
    /// Menu in its canonical visiting order.
    pub fn expand(&self, p: Prime) -> Vec<PipelineParams> {
        match self {
            ParamMenu::Fixed(list) => list.clone(),
            ParamMenu::Sweep {
                max_correction_pairs,
            } => {
                let q = p.get() as usize;
                let mut corrections = vec![(vec![], vec![])];
                for size in 1..=*max_correction_pairs {
                    for plus in subsets(q, size) {
                        for minus in subsets(q, size) {
                            if plus.iter().all(|c| !minus.contains(c)) {
                                corrections.push((plus.clone(), minus));
                            }
                        }
                    }
                }
                let mut out = Vec::new();
                for (plus, minus) in &corrections {
                    for shift in 1..p.get() {
                        for k in 1..p.get() {
                            out.push(PipelineParams {
                                shift,
                                plus_columns: plus.clone(),
                                minus_columns: minus.clone(),
                                k,
                            });
                        }
                    }
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum FourDirectionOutcome {
    Found(Box<PipelineOutput>),
    /// Every menu point was tried without success.
    Exhausted {
        tried: usize,
    },
    /// The budget ran out before the menu did.
    BudgetExhausted {
        tried: usize,
    },
}

/// Visits the menu in canonical order and returns the first output with
/// exactly the four directions `(1,0), (0,1), (1,1), (1,-1)` as special
/// directions. With `allow_multiset = false` only `{0,1}` outputs qualify.
pub fn four_direction_search(
    p: Prime,
    menu: &ParamMenu,
    allow_multiset: bool,
    budget: usize,
) -> Result<FourDirectionOutcome> {
    let params = menu.expand(p);
    let limit = params.len().min(budget);
    let target = four_directions(p);
    let strategy = PairingStrategy::Minimal {
        allow_overlap: allow_multiset,
    };
    let hit = params[..limit]
        .par_iter()
        .map(|pp| run_pipeline(p, pp, &strategy))
        .find_first(|r| match r {
            Ok(Some(out)) => {
                out.special == target && (allow_multiset || out.grid.to_point_set().is_some())
            }
            Ok(None) => false,
            Err(_) => true,
        });
    match hit {
        Some(Ok(Some(out))) => Ok(FourDirectionOutcome::Found(Box::new(out))),
        Some(Err(e)) => Err(e),
        _ if limit < params.len() => Ok(FourDirectionOutcome::BudgetExhausted { tried: limit }),
        _ => Ok(FourDirectionOutcome::Exhausted { tried: limit }),
    }
}
