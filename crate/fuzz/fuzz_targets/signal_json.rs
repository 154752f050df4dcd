#![no_main]

use forge_core::signal::Signal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(w) = serde_json::from_slice::<Signal>(data) {
        let text = serde_json::to_string(&w).unwrap();
        let back: Signal = serde_json::from_str(&text).unwrap();
        assert!(back.same_as(&w));
    }
});
