#![no_main]

use libfuzzer_sys::fuzz_target;
use nilrad::exactla::{Field, Scalar};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(x) = Scalar::parse(s) {
            // printed form must parse back to the same value
            assert_eq!(Scalar::parse(&x.to_string()).unwrap(), x);
        }
        let _ = Scalar::parse_in(s, Field::Prime(7));
    }
});
