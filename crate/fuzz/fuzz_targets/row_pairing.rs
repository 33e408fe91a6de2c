#![no_main]

use libfuzzer_sys::fuzz_target;
use specdir::constructions::pipeline::{build_n11, RowPairing};
use specdir::Prime;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(pairing) = RowPairing::parse(Prime::new(11).unwrap(), text) {
            let _ = pairing.validate(&build_n11());
        }
    }
});
