//! Replays the checked-in fuzz seeds through the fuzz target bodies.

use std::fs;
use std::path::PathBuf;

use specdir::constructions::pipeline::{build_n11, RowPairing};
use specdir::decomposition::{reconstruct, LineWeighting};
use specdir::format::{parse_ascii, parse_json, write_ascii, write_json};
use specdir::{Direction, Prime};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<Vec<u8>> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn ascii_seeds() {
    let mut parsed = 0;
    for data in seeds("parse_ascii") {
        if let Ok(g) = parse_ascii(std::str::from_utf8(&data).unwrap()) {
            assert_eq!(parse_ascii(&write_ascii(&g)).unwrap(), g);
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn json_seeds() {
    let mut parsed = 0;
    for data in seeds("parse_json") {
        if let Ok(g) = parse_json(std::str::from_utf8(&data).unwrap()) {
            assert_eq!(parse_json(&write_json(&g)).unwrap(), g);
            parsed += 1;
        }
    }
    assert_eq!(parsed, 2);
}

#[test]
fn line_weighting_seeds() {
    for data in seeds("line_weighting") {
        let v: serde_json::Value = serde_json::from_slice(&data).unwrap();
        let w = LineWeighting::from_json(&v).unwrap();
        assert_eq!(LineWeighting::from_json(&w.to_json()).unwrap(), w);
        assert!(reconstruct(&w).to_integer().is_some());
    }
}

#[test]
fn direction_seeds() {
    for data in seeds("direction") {
        let p = Prime::new(data[0] as u32).unwrap();
        let d = Direction::parse(p, std::str::from_utf8(&data[1..]).unwrap()).unwrap();
        assert_eq!(Direction::parse(p, &d.label(p)).unwrap(), d);
    }
}

#[test]
fn row_pairing_seeds() {
    for data in seeds("row_pairing") {
        let pairing =
            RowPairing::parse(Prime::new(11).unwrap(), std::str::from_utf8(&data).unwrap())
                .unwrap();
        pairing.validate(&build_n11()).unwrap();
    }
}
