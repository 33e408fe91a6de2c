#![no_main]

use libfuzzer_sys::fuzz_target;
use specdir::decomposition::{reconstruct, LineWeighting};

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) {
        if let Ok(w) = LineWeighting::from_json(&v) {
            assert_eq!(LineWeighting::from_json(&w.to_json()).unwrap(), w);
            let _ = reconstruct(&w);
        }
    }
});
