use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use serde::Serialize;

use super::{check_dim, LatticeError, LatticePoint, LatticeSignal};
use crate::scalar::{GaussRat, Scalar};
use crate::tolerance;

/// Lag table `r(k) = Σ_x w(x+k)·conj(w(x))`. Its transform is `|ŵ|²`, so two
/// signals have equal Fourier magnitude on the whole torus iff their tables
/// agree.
#[derive(Debug, Clone, PartialEq)]
pub struct Autocorrelation {
    dim: usize,
    lags: BTreeMap<LatticePoint, Scalar>,
}

impl Autocorrelation {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lags(&self) -> &BTreeMap<LatticePoint, Scalar> {
        &self.lags
    }

    pub fn lag(&self, k: &LatticePoint) -> Scalar {
        self.lags.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_exact(&self) -> bool {
        self.lags.values().all(Scalar::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.lags.is_empty()
    }

    /// `r(−k) = conj(r(k))` for every stored lag, and `r(0)` real.
    pub fn is_hermitian(&self) -> bool {
        let scale = self.lag(&LatticePoint::origin(self.dim)).abs().max(f64::MIN_POSITIVE);
        let tol = tolerance::LAG_ABS.max(tolerance::ZERO_PRUNE_REL * scale);
        self.lags
            .iter()
            .all(|(k, v)| self.lag(&-k).same_as(&v.conj(), tol))
    }

    /// `|ŵ(p)|²` reconstructed from the lags: `(2π)^{-2d} Σ_k r(k) e^{-ip·k}`.
    pub fn power_at(&self, p: &[f64]) -> f64 {
        let s: Complex64 = self
            .lags
            .iter()
            .map(|(k, v)| v.to_c64() * Complex64::from_polar(1.0, -k.dot(p)))
            .sum();
        s.re * (2.0 * std::f64::consts::PI).powi(-2 * self.dim as i32)
    }

    /// Per-axis span `max |k_j|` of the stored lags.
    pub fn half_width(&self) -> Vec<i64> {
        let mut w = vec![0; self.dim];
        for k in self.lags.keys() {
            for (j, &c) in k.coords().iter().enumerate() {
                w[j] = w[j].max(c.abs());
            }
        }
        w
    }
}

pub fn autocorrelation(w: &LatticeSignal) -> Autocorrelation {
    let lags = if w.is_exact() {
        exact_lags(w)
    } else {
        float_lags(w)
    };
    Autocorrelation { dim: w.dim(), lags }
}

// Scales every value to a Gaussian integer with a common denominator so the
// double loop runs on integers only.
fn exact_lags(w: &LatticeSignal) -> BTreeMap<LatticePoint, Scalar> {
    let mut den = BigInt::one();
    for (_, v) in w.iter() {
        if let Scalar::Exact(z) = v {
            den = den.lcm(z.re.denom()).lcm(z.im.denom());
        }
    }
    let scaled: Vec<(&LatticePoint, BigInt, BigInt)> = w
        .iter()
        .map(|(x, v)| match v {
            Scalar::Exact(z) => (
                x,
                (&z.re * BigRational::from_integer(den.clone())).to_integer(),
                (&z.im * BigRational::from_integer(den.clone())).to_integer(),
            ),
            Scalar::Float(_) => unreachable!("exact path only"),
        })
        .collect();
    let mut acc: BTreeMap<LatticePoint, (BigInt, BigInt)> = BTreeMap::new();
    for (u, au, bu) in &scaled {
        for (v, av, bv) in &scaled {
            let k = *u - *v;
            let e = acc.entry(k).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            e.0 += au * av + bu * bv;
            e.1 += bu * av - au * bv;
        }
    }
    let den2 = BigRational::from_integer(&den * &den);
    acc.into_iter()
        .filter(|(_, (re, im))| !(re.is_zero() && im.is_zero()))
        .map(|(k, (re, im))| {
            let z = GaussRat::new(
                BigRational::from_integer(re) / &den2,
                BigRational::from_integer(im) / &den2,
            );
            (k, Scalar::Exact(z))
        })
        .collect()
}

fn float_lags(w: &LatticeSignal) -> BTreeMap<LatticePoint, Scalar> {
    let values: Vec<(&LatticePoint, Complex64)> = w.iter().map(|(x, v)| (x, v.to_c64())).collect();
    let mut acc: BTreeMap<LatticePoint, Complex64> = BTreeMap::new();
    for (u, a) in &values {
        for (v, b) in &values {
            *acc.entry(*u - *v).or_insert(Complex64::new(0.0, 0.0)) += a * b.conj();
        }
    }
    acc.into_iter()
        .filter(|(_, z)| z.norm() != 0.0)
        .map(|(k, z)| (k, Scalar::Float(z)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagMismatch {
    pub lag: LatticePoint,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Outcome of comparing two lag tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnitudeComparison {
    /// `|f̂|² = |ĝ|²` and the common magnitude is not identically zero.
    pub equal: bool,
    /// Both tables were exact and compared without tolerance.
    pub exact: bool,
    /// Both signals are zero; reported separately, `equal` is false.
    pub trivially_zero: bool,
    pub max_deviation: f64,
    pub lags_compared: usize,
    /// First differing lag, with the zero lag reported first when it differs.
    pub mismatch: Option<LagMismatch>,
}

pub fn compare_autocorrelations(a: &Autocorrelation, b: &Autocorrelation) -> MagnitudeComparison {
    let exact = a.is_exact() && b.is_exact();
    let mut keys: Vec<&LatticePoint> = a.lags.keys().chain(b.lags.keys()).collect();
    keys.sort();
    keys.dedup();
    let origin = LatticePoint::origin(a.dim);
    if let Some(pos) = keys.iter().position(|k| **k == origin) {
        let k0 = keys.remove(pos);
        keys.insert(0, k0);
    }
    let mut max_deviation: f64 = 0.0;
    let mut mismatch = None;
    for k in &keys {
        let (x, y) = (a.lag(k), b.lag(k));
        let dev = (x.to_c64() - y.to_c64()).norm();
        max_deviation = max_deviation.max(dev);
        let same = if exact { x == y } else { dev <= tolerance::LAG_ABS };
        if !same && mismatch.is_none() {
            mismatch = Some(LagMismatch {
                lag: (*k).clone(),
                lhs: x,
                rhs: y,
            });
        }
    }
    let trivially_zero = a.is_zero() && b.is_zero();
    MagnitudeComparison {
        equal: mismatch.is_none() && !trivially_zero && a.dim == b.dim,
        exact,
        trivially_zero,
        max_deviation,
        lags_compared: keys.len(),
        mismatch,
    }
}

/// Detailed comparison of `|f̂|²` and `|ĝ|²` through their lag tables.
pub fn compare_fourier_magnitude(
    f: &LatticeSignal,
    g: &LatticeSignal,
) -> Result<MagnitudeComparison, LatticeError> {
    check_dim(f.dim(), g.dim())?;
    Ok(compare_autocorrelations(&autocorrelation(f), &autocorrelation(g)))
}

/// `|f̂|² ≡ |ĝ|² ≢ 0` on the torus.
pub fn equal_fourier_magnitude(f: &LatticeSignal, g: &LatticeSignal) -> Result<bool, LatticeError> {
    Ok(compare_fourier_magnitude(f, g)?.equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v, 0)
    }

    /// Straight double loop over lags `k` in a window, using `Scalar`
    /// arithmetic throughout (independent of the integer-scaled path).
    fn brute_lags(w: &LatticeSignal, window: i64) -> BTreeMap<i64, Scalar> {
        let mut out = BTreeMap::new();
        for k in -window..=window {
            let mut acc = Scalar::zero();
            for x in -window..=window {
                let a = w.get(&LatticePoint::from(x + k));
                let b = w.get(&LatticePoint::from(x));
                acc = acc + a * b.conj();
            }
            if !acc.is_zero() {
                out.insert(k, acc);
            }
        }
        out
    }

    fn as_1d(r: &Autocorrelation) -> BTreeMap<i64, Scalar> {
        r.lags().iter().map(|(k, v)| (k.coords()[0], v.clone())).collect()
    }

    #[test]
    fn impulse_has_unit_zero_lag() {
        let r = autocorrelation(&LatticeSignal::delta(0.into(), s(1)));
        assert_eq!(r.lags().len(), 1);
        assert_eq!(r.lag(&LatticePoint::from(0)), s(1));
    }

    #[test]
    fn example_pair_lag_tables() {
        let f = LatticeSignal::from_values_1d(-1, &[s(2), s(1), s(6), s(3)]);
        let g = LatticeSignal::from_values_1d(0, &[s(1), s(2), s(3), s(6)]);
        let rf = autocorrelation(&f);
        let rg = autocorrelation(&g);
        assert_eq!(as_1d(&rf), brute_lags(&f, 10));
        assert_eq!(as_1d(&rg), brute_lags(&g, 10));
        let expected = [(0, 50), (1, 26), (2, 15), (3, 6)];
        for (k, v) in expected {
            assert_eq!(rf.lag(&LatticePoint::from(k)), s(v));
            assert_eq!(rf.lag(&LatticePoint::from(-k)), s(v));
        }
        assert_eq!(rf, rg);
        assert!(equal_fourier_magnitude(&f, &g).unwrap());
    }

    #[test]
    fn scaling_breaks_equality_at_lag_zero() {
        let f = LatticeSignal::from_values_1d(-1, &[s(2), s(1), s(6), s(3)]);
        let cmp = compare_fourier_magnitude(&f, &f.scale(&s(2))).unwrap();
        assert!(!cmp.equal);
        let m = cmp.mismatch.unwrap();
        assert_eq!(m.lag, LatticePoint::from(0));
        assert_eq!((m.lhs, m.rhs), (s(50), s(200)));
    }

    #[test]
    fn conj_reflection_preserves_magnitude() {
        let f = LatticeSignal::from_values_1d(3, &[Scalar::from_int(1, 2), Scalar::ratio(1, 3, -1, 7), s(5)]);
        assert!(equal_fourier_magnitude(&f, &f.conj_reflect()).unwrap());
    }

    #[test]
    fn zero_signals_are_flagged() {
        let z = LatticeSignal::zero(1).unwrap();
        let cmp = compare_fourier_magnitude(&z, &z).unwrap();
        assert!(!cmp.equal);
        assert!(cmp.trivially_zero);
    }

    #[test]
    fn complex_rational_lags_match_brute_force() {
        let w = LatticeSignal::from_values_1d(
            -2,
            &[Scalar::ratio(1, 2, 3, 4), s(0), Scalar::ratio(-5, 3, 1, 6), Scalar::i()],
        );
        let r = autocorrelation(&w);
        assert_eq!(as_1d(&r), brute_lags(&w, 10));
        assert!(r.is_hermitian());
    }

    #[test]
    fn float_path_agrees_with_exact() {
        let w = LatticeSignal::from_values_1d(0, &[Scalar::ratio(1, 2, 3, 4), Scalar::from_int(2, -1)]);
        let re = autocorrelation(&w);
        let rf = autocorrelation(&w.to_float());
        let cmp = compare_autocorrelations(&re, &rf);
        assert!(cmp.equal && !cmp.exact);
    }
}
