#![no_main]

use libfuzzer_sys::fuzz_target;
use specdir::format::{parse_any, parse_json, write_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(g) = parse_json(text) {
            assert_eq!(parse_json(&write_json(&g)).unwrap(), g);
        }
        let _ = parse_any(text);
    }
});
