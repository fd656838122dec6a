#![no_main]

use libfuzzer_sys::fuzz_target;
use nilrad::exactla::Field;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = Field::parse(s) {
            assert_eq!(Field::parse(&f.to_string()).unwrap(), f);
        }
    }
});
