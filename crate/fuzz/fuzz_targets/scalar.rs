#![no_main]

use forge_core::scalar::{parse_phase_angle, Scalar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(z) = Scalar::parse(text) {
        assert_eq!(Scalar::parse(&z.to_string()).unwrap(), z);
    }
    let _ = parse_phase_angle(text);
});
