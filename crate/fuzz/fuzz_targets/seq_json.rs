#![no_main]

use libfuzzer_sys::fuzz_target;
use nilrad::blockstruct::BlockSeq;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(seq) = BlockSeq::from_json_str(s) {
            assert_eq!(BlockSeq::from_json_str(&seq.to_json_string()).unwrap(), seq);
        }
    }
});
