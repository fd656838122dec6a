#![no_main]

use libfuzzer_sys::fuzz_target;
use nilrad::blockstruct::Shape;

fuzz_target!(|data: &[u8]| {
    if data.len() < 64 {
        if let Ok(s) = std::str::from_utf8(data) {
            if let Ok(shape) = Shape::parse(s) {
                let _ = shape.rho();
                assert_eq!(shape.offsets().len(), shape.k());
            }
        }
    }
});
