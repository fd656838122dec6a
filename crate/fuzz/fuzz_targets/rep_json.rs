#![no_main]

use libfuzzer_sys::fuzz_target;
use nilrad::reps::RepSpec;

fuzz_target!(|data: &[u8]| {
    if data.len() < 4096 {
        if let Ok(s) = std::str::from_utf8(data) {
            let _ = RepSpec::from_json_str(s);
        }
    }
});
