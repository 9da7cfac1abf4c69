#![no_main]

use libfuzzer_sys::fuzz_target;
use stakit::Multivector;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = serde_json::from_slice::<Multivector>(data) {
        let text = serde_json::to_string(&m).unwrap();
        let back: Multivector = serde_json::from_str(&text).unwrap();
        assert!(back == m || !m.is_finite());
    }
});
