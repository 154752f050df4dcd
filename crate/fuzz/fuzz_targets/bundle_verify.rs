#![no_main]

use forge_core::constructions::Bundle;
use forge_core::verification::run_claims;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(bundle) = serde_json::from_slice::<Bundle>(data) {
        let _ = run_claims(&bundle);
    }
});
