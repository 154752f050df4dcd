#![no_main]

use forge_core::cli::parse::parse_entries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(entries) = parse_entries(text) {
        let dim = entries[0].0.len();
        assert!(entries.iter().all(|(x, _)| x.len() == dim));
    }
});
