#![no_main]

use libfuzzer_sys::fuzz_target;
use nilrad_cli::sweep::SweepConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = serde_json::from_slice::<SweepConfig>(data) {
        let _ = cfg.validate();
        let _ = cfg.hash();
    }
});
