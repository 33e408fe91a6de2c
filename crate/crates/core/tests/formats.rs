use specdir::constructions::figure_fixture;
use specdir::decomposition::{decompose, LineWeighting};
use specdir::format::{
    parse_any, parse_ascii, parse_integer_grid, parse_json, parse_rational, write_ascii, write_json,
};
use specdir::{Direction, Error, Point, Prime, Rational, RationalGrid};

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn ascii_rows_run_top_down() {
    let g = parse_ascii("0 0 1\n0 1 0\n1 0 0\n").unwrap();
    assert_eq!(g.get(Point::new(0, 0)), &Rational::from_integer(1.into()));
    assert_eq!(g.get(Point::new(2, 2)), &Rational::from_integer(1.into()));
    assert_eq!(g.get(Point::new(0, 2)), &Rational::from_integer(0.into()));
}

#[test]
fn ascii_and_json_round_trip() {
    for p in [5, 7, 11, 13] {
        let f = figure_fixture(p).unwrap().grid;
        assert_eq!(parse_integer_grid(&write_ascii(&f)).unwrap(), f);
        assert_eq!(parse_integer_grid(&write_json(&f)).unwrap(), f);
        let r = f.to_rational();
        assert_eq!(parse_any(&write_json(&r)).unwrap(), r);
    }
}

#[test]
fn rationals_round_trip() {
    let g = RationalGrid::from_fn(pr(3), |pt| {
        Rational::new((pt.x as i64 - 1).into(), (pt.y as i64 + 1).into())
    });
    let text = write_ascii(&g);
    assert!(text.contains("-1/2"));
    assert_eq!(parse_ascii(&text).unwrap(), g);
    assert_eq!(parse_json(&write_json(&g)).unwrap(), g);
}

#[test]
fn comments_and_blank_lines_are_skipped() {
    let g = parse_ascii("# a comment\n\n1 2 3\n4 5 6\n\n7 8 9\n").unwrap();
    assert_eq!(g.get(Point::new(0, 2)), &Rational::from_integer(1.into()));
}

#[test]
fn parse_errors_carry_line_and_column() {
    match parse_ascii("0 0 0\n0 x 0\n0 0 0\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
        other => panic!("unexpected {other:?}"),
    }
    match parse_ascii("0 0 0\n0 0 0\n0 0 1/0\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 5)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse_ascii("0 0\n0 0\n"),
        Err(Error::Dimension(_))
    ));
    assert!(matches!(
        parse_ascii("0 0 0\n0 0\n0 0 0\n"),
        Err(Error::Dimension(_))
    ));
    assert!(parse_ascii("").is_err());
    assert!(parse_json("{\"p\": 3, \"grid\": [[0,0],[0,0],[0,0]]}").is_err());
    assert!(parse_json("[").is_err());
}

#[test]
fn rational_tokens() {
    assert_eq!(
        parse_rational("-3/6"),
        Some(Rational::new((-1).into(), 2.into()))
    );
    assert_eq!(parse_rational("+4"), Some(Rational::from_integer(4.into())));
    for bad in ["", "1/", "/2", "1/-2", "a", "1.5", "--1", "1/0"] {
        assert_eq!(parse_rational(bad), None, "{bad}");
    }
}

#[test]
fn integer_grid_rejects_fractions() {
    assert!(parse_integer_grid("1/2 0 0\n0 0 0\n0 0 0\n").is_err());
}

#[test]
fn line_weighting_json_round_trip() {
    let f = figure_fixture(11).unwrap().grid.to_rational();
    let w = decompose(&f).unwrap();
    let back = LineWeighting::from_json(&w.to_json()).unwrap();
    assert_eq!(back, w);
}

#[test]
fn direction_labels_round_trip() {
    let p = pr(7);
    for d in Direction::all(p) {
        assert_eq!(Direction::parse(p, &d.label(p)).unwrap(), d);
    }
    assert_eq!(Direction::Slope(6).label(p), "(1,-1)");
    assert!(Direction::parse(p, "(0,0)").is_err());
    assert!(Direction::parse(p, "(1,2,3)").is_err());
    assert_eq!(Direction::parse(p, "[2,4]").unwrap(), Direction::Slope(2));
}
