#![no_main]

use libfuzzer_sys::fuzz_target;
use stakit_cli::FieldConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = serde_json::from_slice::<FieldConfig>(data) {
        let _ = cfg.build();
    }
});
