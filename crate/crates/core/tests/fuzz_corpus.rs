//! Replays the checked-in fuzz corpus through the same harness bodies the
//! fuzz targets use, plus a few hostile inputs and a random-string sweep.

use std::path::PathBuf;

use proptest::prelude::*;

use forge_core::cli::parse::{parse_body, parse_entries};
use forge_core::constructions::Bundle;
use forge_core::scalar::{parse_phase_angle, Scalar};
use forge_core::signal::Signal;
use forge_core::verification::run_claims;

fn entries_target(text: &str) {
    if let Ok(entries) = parse_entries(text) {
        let dim = entries[0].0.len();
        assert!(entries.iter().all(|(x, _)| x.len() == dim));
    }
}

fn body_target(text: &str) {
    let _ = parse_body(text);
}

fn scalar_target(text: &str) {
    if let Ok(z) = Scalar::parse(text) {
        assert_eq!(Scalar::parse(&z.to_string()).unwrap(), z);
    }
    let _ = parse_phase_angle(text);
}

fn signal_target(data: &[u8]) {
    if let Ok(w) = serde_json::from_slice::<Signal>(data) {
        let text = serde_json::to_string(&w).unwrap();
        let back: Signal = serde_json::from_str(&text).unwrap();
        assert!(back.same_as(&w));
    }
}

fn bundle_target(data: &[u8]) {
    if let Ok(bundle) = serde_json::from_slice::<Bundle>(data) {
        let _ = run_claims(&bundle);
    }
}

fn corpus(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut seeds: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let data = std::fs::read(&p).unwrap();
            (p, data)
        })
        .collect();
    seeds.sort();
    assert!(!seeds.is_empty(), "no seeds in {}", dir.display());
    seeds
}

fn replay_text(target: &str, run: fn(&str)) {
    for (path, data) in corpus(target) {
        eprintln!("{}", path.display());
        run(&String::from_utf8_lossy(&data));
    }
}

#[test]
fn entry_corpus() {
    replay_text("parse_entries", entries_target);
}

#[test]
fn body_corpus() {
    replay_text("parse_body", body_target);
}

#[test]
fn scalar_corpus() {
    replay_text("scalar", scalar_target);
}

#[test]
fn signal_corpus() {
    for (_, data) in corpus("signal_json") {
        assert!(serde_json::from_slice::<Signal>(&data).is_ok());
        signal_target(&data);
    }
}

#[test]
fn bundle_corpus_verifies() {
    for (path, data) in corpus("bundle_verify") {
        let bundle: Bundle = serde_json::from_slice(&data).unwrap();
        assert!(run_claims(&bundle).unwrap().pass, "{}", path.display());
    }
}

#[test]
fn hostile_inputs_are_rejected_cleanly() {
    for t in [
        "", ";;;", "=", "0=", "=1", "1/0=1", "0=1/0", "0=1e99999", "0=ii", "0=+-1",
        "0=1;0=2", "9999999999999999999999=1", "0,=1", "π=1", "0=1\u{0}", &"1,".repeat(5000),
    ] {
        entries_target(t);
        scalar_target(t);
        body_target(t);
    }
    for t in [
        "ball:0:-1", "ball:0:0", "ball:0:1e400", "box:1:0", "box:0,0:1", "ball::1", "box:1/0:1",
        "ball:0,0,0,0,0,0,0,0:1",
    ] {
        body_target(t);
    }
    for t in ["pi/0", "0pi", "pi*", "*pi", "pipi", "pi/pi", "1e4097pi"] {
        scalar_target(t);
    }
    let signals: [&[u8]; 5] = [
        br#"{"mode":"discrete","dim":0,"entries":[]}"#,
        br#"{"mode":"discrete","dim":1,"entries":[{"x":[0,1],"re":"1","im":"0"}]}"#,
        br#"{"mode":"discrete","dim":1,"entries":[{"x":[9223372036854775807],"re":"1","im":"0"}]}"#,
        br#"{"mode":"continuous","dim":1,"atoms":[{"kind":"box","lo":["1"],"hi":["0"],"coef":{"re":"1","im":"0"}}]}"#,
        b"[]",
    ];
    for s in signals {
        signal_target(s);
    }
    let far = br#"{"kind":"thm1","mode":"discrete","dim":1,
        "signals":{"f":{"mode":"discrete","dim":1,"entries":[{"x":[-4000000000000000000],"re":"1","im":"0"},{"x":[4000000000000000000],"re":"2","im":"0"}]},
                   "g":{"mode":"discrete","dim":1,"entries":[{"x":[0],"re":"1","im":"0"}]}},
        "claims":[
          {"name":"a","statement":"","expected":true,"verifier":"","check":{"type":"associated","lhs":"f","rhs":"g"}},
          {"name":"b","statement":"","expected":true,"verifier":"","check":{"type":"fourier_magnitude_equal","lhs":"f","rhs":"g","grid":18446744073709551615}},
          {"name":"c","statement":"","expected":true,"verifier":"","check":{"type":"self_conj_associated"}}]}"#;
    bundle_target(far);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn random_text_never_panics(t in "[-+0-9/.,;=:ieπpa-z ]{0,40}") {
        entries_target(&t);
        body_target(&t);
        scalar_target(&t);
    }

    #[test]
    fn random_bytes_never_panic(data in proptest::collection::vec(any::<u8>(), 0..256)) {
        signal_target(&data);
        bundle_target(&data);
    }
}
