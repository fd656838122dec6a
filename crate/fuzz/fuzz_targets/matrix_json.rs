#![no_main]

use libfuzzer_sys::fuzz_target;
use nilrad::exactla::{matrix_from_json, Field};

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) {
        let _ = matrix_from_json(&v, Field::Rational);
        let _ = matrix_from_json(&v, Field::Prime(5));
    }
});
