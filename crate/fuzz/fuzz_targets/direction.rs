#![no_main]

use libfuzzer_sys::fuzz_target;
use specdir::{Direction, Prime};

fuzz_target!(|data: &[u8]| {
    let Some((&p, rest)) = data.split_first() else {
        return;
    };
    let Ok(p) = Prime::new(p as u32) else { return };
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(d) = Direction::parse(p, text) {
            assert_eq!(Direction::parse(p, &d.label(p)).unwrap(), d);
        }
    }
});
