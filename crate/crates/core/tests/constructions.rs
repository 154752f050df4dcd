//! Checks of constructed bundles against oracles that share no code with the
//! library: signals are read back from JSON and compared by brute force.

use std::collections::BTreeMap;

use num::complex::Complex64;
use serde_json::Value;

type Sig = BTreeMap<Vec<i64>, Complex64>;

const TOL: f64 = 1e-9;

fn bundle(args: &[&str]) -> Value {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("forge").chain(args.iter().copied());
    let code = forge_core::cli::run(argv, &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    serde_json::from_slice(&out).unwrap()
}

fn frac(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

fn sig(b: &Value, name: &str) -> Sig {
    b["signals"][name]["entries"]
        .as_array()
        .unwrap_or_else(|| panic!("no lattice signal {name}"))
        .iter()
        .map(|e| {
            let x = e["x"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect();
            (x, Complex64::new(frac(e["re"].as_str().unwrap()), frac(e["im"].as_str().unwrap())))
        })
        .filter(|(_, v)| v.norm() > 0.0)
        .collect()
}

fn lit(entries: &[(i64, f64)]) -> Sig {
    entries.iter().map(|&(x, v)| (vec![x], Complex64::new(v, 0.0))).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn same(a: &Sig, b: &Sig) -> bool {
    a.len() == b.len() && a.iter().all(|(x, v)| b.get(x).is_some_and(|w| (v - w).norm() <= TOL))
}

/// `Σ_x w(x + k) conj(w(x))` for every lag `k`.
fn autocorr(w: &Sig) -> Sig {
    let mut r = Sig::new();
    for (x, a) in w {
        for (y, b) in w {
            *r.entry(sub(x, y)).or_default() += a * b.conj();
        }
    }
    r.retain(|_, v| v.norm() > TOL);
    r
}

fn conj_reflect(w: &Sig) -> Sig {
    w.iter().map(|(x, v)| (x.iter().map(|c| -c).collect(), v.conj())).collect()
}

/// Whether `g = c·base(· − s)` for some unimodular `c` and lattice shift `s`,
/// trying every shift that lines up the first support points.
fn shift_unit_related(base: &Sig, g: &Sig) -> bool {
    if base.len() != g.len() || base.is_empty() {
        return base.is_empty() && g.is_empty();
    }
    let (x0, b0) = base.iter().next().unwrap();
    let (y0, g0) = g.iter().next().unwrap();
    let s = sub(y0, x0);
    let c = g0 / b0;
    if (c.norm() - 1.0).abs() > TOL {
        return false;
    }
    base.iter().all(|(x, v)| {
        let y: Vec<i64> = x.iter().zip(&s).map(|(a, b)| a + b).collect();
        g.get(&y).is_some_and(|w| (w - c * v).norm() <= TOL)
    })
}

fn associated(f: &Sig, g: &Sig) -> bool {
    shift_unit_related(f, g) || shift_unit_related(&conj_reflect(f), g)
}

fn dft(w: &Sig, p: &[f64]) -> Complex64 {
    w.iter()
        .map(|(x, v)| {
            let phase: f64 = x.iter().zip(p).map(|(a, b)| *a as f64 * b).sum();
            v * Complex64::from_polar(1.0, -phase)
        })
        .sum()
}

fn claim_names(b: &Value) -> Vec<String> {
    b["claims"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect()
}

#[test]
fn example1_matches_hand_computation() {
    // ψ = δ₀ + 3δ₂ and taps {0: 1, 1: 2}.
    let b = bundle(&["example1"]);
    let f = sig(&b, "f");
    let g = sig(&b, "g");
    assert!(same(&f, &lit(&[(-1, 2.0), (0, 1.0), (1, 6.0), (2, 3.0)])));
    assert!(same(&g, &lit(&[(0, 1.0), (1, 2.0), (2, 3.0), (3, 6.0)])));
    let r = autocorr(&f);
    assert!(same(&r, &autocorr(&g)));
    assert!(same(&r, &lit(&[(-3, 6.0), (-2, 15.0), (-1, 26.0), (0, 50.0), (1, 26.0), (2, 15.0), (3, 6.0)])));
    assert!(!associated(&f, &g));
}

#[test]
fn pair_constructions_share_autocorrelation_but_not_orbit() {
    let cases: [&[&str]; 6] = [
        &["example1", "--a1", "2+i", "--a2", "-1/2", "--b1", "3", "--b2", "i", "--y", "2", "--z", "3"],
        &["thm1"],
        &["thm1", "--stencil", "0,0=1;1,0=i;0,2=3", "--psi", "0,0=1;1,1=2"],
        &["thm2"],
        &["thm2", "--stencil", "0=3/5+4/5i;1=1;-1=i", "--psi", "0=1;5=3"],
        &["thm4"],
    ];
    for args in cases {
        let b = bundle(args);
        let f = sig(&b, "f");
        let g = sig(&b, "g");
        assert!(same(&autocorr(&f), &autocorr(&g)), "{args:?}");
        assert!(!associated(&f, &g), "{args:?}");
    }
}

#[test]
fn pauli_pairs_have_equal_moduli_pointwise() {
    for args in [&["thm2"][..], &["thm2", "--stencil", "0=3/5+4/5i;1=1;-1=i", "--psi", "0=1;5=3"]] {
        let b = bundle(args);
        let f = sig(&b, "f");
        let g = sig(&b, "g");
        for (x, v) in &f {
            let w = g.get(x).copied().unwrap_or_default();
            assert!((v.norm() - w.norm()).abs() <= TOL, "{args:?} at {x:?}");
        }
        assert_eq!(f.len(), g.len());
    }
}

#[test]
fn background_solutions_are_conjugate_reflections() {
    let b = bundle(&["thm3"]);
    let h1 = sig(&b, "h1");
    let h2 = sig(&b, "h2");
    assert!(same(&h1, &lit(&[(-5, 1.0), (-1, 1.0), (1, 2.0), (5, 1.0)])));
    assert!(same(&h2, &conj_reflect(&h1)));
    assert!(same(&autocorr(&h1), &autocorr(&h2)));
    assert!(!same(&sig(&b, "w1"), &sig(&b, "w2")));
}

#[test]
fn reference_background_is_not_an_orbit() {
    let b = bundle(&["thm4"]);
    let (w0, w1, w2) = (sig(&b, "w0"), sig(&b, "w1"), sig(&b, "w2"));
    let h1 = sig(&b, "h1");
    let h2 = sig(&b, "h2");
    let plus = |a: &Sig, c: &Sig| {
        let mut s = a.clone();
        for (x, v) in c {
            *s.entry(x.clone()).or_default() += v;
        }
        s.retain(|_, v| v.norm() > TOL);
        s
    };
    assert!(same(&h1, &plus(&w1, &w0)));
    assert!(same(&h2, &plus(&w2, &w0)));
    assert!(same(&autocorr(&h1), &autocorr(&h2)));
    assert!(!associated(&h1, &h2));
    // Naive DFT agrees with the exact verdict on a dense grid.
    for k in 0..257 {
        let p = [-std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / 256.0];
        assert!((dft(&h1, &p).norm() - dft(&h2, &p).norm()).abs() <= 1e-9);
    }
    assert!(claim_names(&b).contains(&"background-not-associated".to_string()));
}

#[test]
fn discrete_example2_is_a_background_pair() {
    let b = bundle(&["example2"]);
    let h1 = sig(&b, "h1");
    let h2 = sig(&b, "h2");
    assert!(same(&autocorr(&h1), &autocorr(&h2)));
    let names = claim_names(&b);
    if names.contains(&"background-not-associated".to_string()) {
        assert!(!associated(&h1, &h2));
    }
}
