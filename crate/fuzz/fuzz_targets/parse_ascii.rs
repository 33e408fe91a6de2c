#![no_main]

use libfuzzer_sys::fuzz_target;
use specdir::format::{parse_ascii, write_ascii};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(g) = parse_ascii(text) {
            assert_eq!(parse_ascii(&write_ascii(&g)).unwrap(), g);
        }
    }
});
