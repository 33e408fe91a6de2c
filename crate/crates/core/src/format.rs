//! ASCII and JSON grid formats.
//!
//! Both formats list rows top to bottom: text row `r` holds the points with
//! `y = p-1-r`, and entry `c` of a row is the point with `x = c`. This is how
//! grids are drawn with the y axis pointing up.
//!
//! ASCII: `p` lines of `p` whitespace-separated entries, each an integer or a
//! rational `a/b`. Blank lines and lines starting with `#` are ignored.
//!
//! JSON: `{"p": 5, "grid": [[0, 1, ...], ...]}` with integer entries as JSON
//! numbers and non-integers as `"a/b"` strings.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::plane::{Grid, IntegerGrid, Point, RationalGrid};
use crate::Rational;

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a` or `a/b` (optional sign on `a`, `b > 0`).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let digits = |t: &str, signed: bool| {
        let body = if signed {
            t.strip_prefix(['-', '+']).unwrap_or(t)
        } else {
            t
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        None => digits(s, true)
            .then(|| s.parse::<BigInt>().ok())
            .flatten()
            .map(Rational::from_integer),
        Some((n, d)) => {
            if !digits(n, true) || !digits(d, false) {
                return None;
            }
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero() && d.is_positive()).then(|| Rational::new(n, d))
        }
    }
}

/// Grid values that can be written in the text formats.
pub trait GridEntry: Clone {
    fn render(&self) -> String;
    fn to_json(&self) -> Value;
}

impl GridEntry for i64 {
    fn render(&self) -> String {
        self.to_string()
    }

    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl GridEntry for Rational {
    fn render(&self) -> String {
        format_rational(self)
    }

    fn to_json(&self) -> Value {
        use num_traits::ToPrimitive;
        match self.is_integer().then(|| self.numer().to_i64()).flatten() {
            Some(n) => json!(n),
            None => Value::String(format_rational(self)),
        }
    }
}

fn rows_top_down<T: Clone>(g: &Grid<T>) -> Vec<Vec<T>> {
    let q = g.prime().get();
    (0..q)
        .map(|r| (0..q).map(|x| g.at(x, q - 1 - r).clone()).collect())
        .collect()
}

fn from_rows_top_down<T: Clone>(p: Prime, rows: Vec<Vec<T>>) -> Grid<T> {
    let q = p.get();
    Grid::from_fn(p, |pt: Point| {
        rows[(q - 1 - pt.y) as usize][pt.x as usize].clone()
    })
}

/// Builds a grid from matrix rows listed top to bottom.
pub fn grid_from_matrix<T: Clone>(rows: &[Vec<T>]) -> Result<Grid<T>> {
    let n = rows.len();
    let p = Prime::new(n as u32)
        .map_err(|_| Error::Dimension(format!("{n} rows is not an odd prime <= 97")))?;
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {n}",
                r + 1,
                row.len()
            )));
        }
    }
    Ok(from_rows_top_down(p, rows.to_vec()))
}

/// Matrix rows top to bottom.
pub fn grid_to_matrix<T: Clone>(g: &Grid<T>) -> Vec<Vec<T>> {
    rows_top_down(g)
}

pub fn write_ascii<T: GridEntry>(g: &Grid<T>) -> String {
    let mut out = String::new();
    for row in rows_top_down(g) {
        let line: Vec<String> = row.iter().map(GridEntry::render).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_ascii(text: &str) -> Result<RationalGrid> {
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 0usize;
        for tok in line.split_whitespace() {
            let at = line[col..].find(tok).unwrap() + col;
            col = at + tok.len();
            let v = parse_rational(tok).ok_or_else(|| Error::Parse {
                line: ln + 1,
                column: at + 1,
                message: format!("not an integer or rational: {tok:?}"),
            })?;
            row.push(v);
        }
        rows.push((ln + 1, row));
    }
    let Some(width) = rows.first().map(|(_, r)| r.len()) else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty grid".into(),
        });
    };
    for (ln, row) in &rows {
        if row.len() != width {
            return Err(Error::Dimension(format!(
                "row on line {ln} has {} entries, expected {width}",
                row.len()
            )));
        }
    }
    if rows.len() != width {
        return Err(Error::Dimension(format!(
            "{} rows of width {width}; a grid must be square",
            rows.len()
        )));
    }
    let p = Prime::new(width as u32)
        .map_err(|_| Error::Dimension(format!("side {width} is not an odd prime <= 97")))?;
    Ok(from_rows_top_down(
        p,
        rows.into_iter().map(|(_, r)| r).collect(),
    ))
}

pub fn write_json<T: GridEntry>(g: &Grid<T>) -> String {
    let grid: Vec<Vec<Value>> = rows_top_down(g)
        .iter()
        .map(|row| row.iter().map(GridEntry::to_json).collect())
        .collect();
    json!({ "p": g.prime().get(), "grid": grid }).to_string()
}

pub fn parse_json_value(v: &Value) -> Result<RationalGrid> {
    let p = v
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::invalid("grid json: missing integer field \"p\""))?;
    let p = Prime::new(u32::try_from(p).map_err(|_| Error::InvalidPrime(p))?)?;
    let rows = v
        .get("grid")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::invalid("grid json: missing array field \"grid\""))?;
    let q = p.get() as usize;
    if rows.len() != q {
        return Err(Error::Dimension(format!(
            "{} rows, expected p = {q}",
            rows.len()
        )));
    }
    let mut parsed = Vec::with_capacity(q);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::invalid(format!("grid json: row {} is not an array", r + 1)))?;
        if row.len() != q {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {q}",
                r + 1,
                row.len()
            )));
        }
        let vals = row
            .iter()
            .enumerate()
            .map(|(c, e)| {
                let bad = || Error::Parse {
                    line: r + 1,
                    column: c + 1,
                    message: format!("bad grid entry {e}"),
                };
                match e {
                    Value::Number(n) => n
                        .as_i64()
                        .map(|n| Rational::from_integer(n.into()))
                        .ok_or_else(bad),
                    Value::String(s) => parse_rational(s).ok_or_else(bad),
                    _ => Err(bad()),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        parsed.push(vals);
    }
    Ok(from_rows_top_down(p, parsed))
}

pub fn parse_json(text: &str) -> Result<RationalGrid> {
    let v: Value = serde_json::from_str(text)?;
    parse_json_value(&v)
}

/// Parses either format, deciding by the first non-blank character.
pub fn parse_any(text: &str) -> Result<RationalGrid> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_ascii(text)
    }
}

pub fn parse_integer_grid(text: &str) -> Result<IntegerGrid> {
    parse_any(text)?
        .to_integer()
        .ok_or_else(|| Error::invalid("grid has non-integer entries"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3"), Some(Rational::from_integer(3.into())));
        assert_eq!(
            parse_rational("-2/4"),
            Some(Rational::new((-1).into(), 2.into()))
        );
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("/3"), None);
    }

    #[test]
    fn orientation_top_row_is_highest_y() {
        let g = parse_ascii("0 0 1\n0 0 0\n1 0 0\n").unwrap();
        assert_eq!(*g.at(2, 2), Rational::from_integer(1.into()));
        assert_eq!(*g.at(0, 0), Rational::from_integer(1.into()));
        assert_eq!(g.total(), Rational::from_integer(2.into()));
    }

    #[test]
    fn ascii_round_trip_is_exact() {
        let text = "0 1/3 -2\n5 0 0\n0 0 -7/2\n";
        let g = parse_ascii(text).unwrap();
        assert_eq!(write_ascii(&g), text);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let text = r#"{"grid":[[0,"1/3",-2],[5,0,0],[0,0,"-7/2"]],"p":3}"#;
        let g = parse_json(text).unwrap();
        assert_eq!(write_json(&g), text);
        assert_eq!(parse_ascii(&write_ascii(&g)).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_ascii("# plus\n\n0 1 0\n1 1 1\n0 1 0\n\n").unwrap();
        assert_eq!(g.total(), Rational::from_integer(5.into()));
    }

    #[test]
    fn errors_name_their_location() {
        match parse_ascii("0 0 0\n0 x 0\n0 0 0\n") {
            Err(Error::Parse {
                line: 2, column: 3, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_ascii("0 0 0\n0 0\n0 0 0\n") {
            Err(Error::Dimension(msg)) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_ascii("0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n"),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            parse_ascii("0 0 0\n0 0 0\n"),
            Err(Error::Dimension(_))
        ));
        assert!(parse_json(r#"{"p":3,"grid":[[0,0,0],[0,0],[0,0,0]]}"#).is_err());
        assert!(parse_json(r#"{"p":3,"grid":[[0,0,0],[0,0,true],[0,0,0]]}"#).is_err());
        assert!(parse_json(r#"{"p":4,"grid":[]}"#).is_err());
    }
}
