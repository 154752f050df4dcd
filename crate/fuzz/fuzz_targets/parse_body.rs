#![no_main]

use forge_core::cli::parse::parse_body;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = parse_body(text);
});
