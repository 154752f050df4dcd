use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_dim, LatticeError, LatticePoint, MAX_COORD};
use crate::scalar::{scalar_from_parts, scalar_to_parts, Part, Scalar};
use crate::tolerance;

/// A finitely supported complex function on `Z^d`.
///
/// Only nonzero values are stored, keyed in lexicographic order, so equal
/// signals have identical storage and iteration is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalRepr", into = "SignalRepr")]
pub struct LatticeSignal {
    dim: usize,
    entries: BTreeMap<LatticePoint, Scalar>,
}

impl LatticeSignal {
    pub fn zero(dim: usize) -> Result<Self, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        Ok(LatticeSignal {
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a signal from explicit entries. Zero values are dropped;
    /// repeated points are rejected.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = (LatticePoint, Scalar)>,
    {
        let mut out = LatticeSignal::zero(dim)?;
        for (x, v) in entries {
            check_point(dim, &x)?;
            if !v.is_finite() {
                return Err(LatticeError::NonFinite);
            }
            match out.entries.entry(x) {
                Entry::Occupied(e) => return Err(LatticeError::DuplicatePoint(e.key().clone())),
                Entry::Vacant(e) => {
                    if !v.is_zero() {
                        e.insert(v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// One-dimensional signal with `values[k]` at `start + k`.
    pub fn from_values_1d(start: i64, values: &[Scalar]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(k, v)| (LatticePoint::from(start + k as i64), v.clone()));
        LatticeSignal::from_entries(1, entries).expect("1-d entries are well formed")
    }

    /// `coef · δ_x`.
    pub fn delta(x: LatticePoint, coef: Scalar) -> Self {
        let dim = x.dim().max(1);
        LatticeSignal::from_entries(dim, [(x, coef)]).expect("single entry is well formed")
    }

    /// Sums values landing on the same point, then prunes zeros (exact) and
    /// cancellation noise (floating).
    pub(crate) fn accumulate<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (LatticePoint, Scalar)>,
    {
        let mut entries: BTreeMap<LatticePoint, Scalar> = BTreeMap::new();
        for (x, v) in terms {
            match entries.entry(x) {
                Entry::Occupied(mut e) => {
                    let sum = &*e.get() + &v;
                    *e.get_mut() = sum;
                }
                Entry::Vacant(e) => {
                    e.insert(v);
                }
            }
        }
        let mut s = LatticeSignal { dim, entries };
        s.prune();
        s
    }

    fn prune(&mut self) {
        let max = self.entries.values().map(Scalar::abs).fold(0.0, f64::max);
        let threshold = tolerance::ZERO_PRUNE_REL * max;
        self.entries.retain(|_, v| match v {
            Scalar::Exact(z) => !z.is_zero(),
            Scalar::Float(z) => z.norm() > threshold,
        });
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Alias of [`is_empty`](Self::is_empty): no stored entry means `w = 0`.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: &LatticePoint) -> Scalar {
        self.entries.get(x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Scalar)> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &BTreeMap<LatticePoint, Scalar> {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.entries.keys()
    }

    pub fn min_point(&self) -> Option<&LatticePoint> {
        self.entries.keys().next()
    }

    pub fn max_point(&self) -> Option<&LatticePoint> {
        self.entries.keys().next_back()
    }

    /// True when every stored value is a Gaussian rational.
    pub fn is_exact(&self) -> bool {
        self.entries.values().all(Scalar::is_exact)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn norm_sqr(&self) -> Scalar {
        self.entries
            .values()
            .fold(Scalar::zero(), |acc, v| acc + v.norm_sqr())
    }

    /// Per-axis `(min, max)` of the support.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let first = self.min_point()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for x in self.entries.keys() {
            for (j, &c) in x.coords().iter().enumerate() {
                lo[j] = lo[j].min(c);
                hi[j] = hi[j].max(c);
            }
        }
        Some((lo, hi))
    }

    pub fn scale(&self, c: &Scalar) -> LatticeSignal {
        LatticeSignal::accumulate(self.dim, self.entries.iter().map(|(x, v)| (x.clone(), c * v)))
    }

    /// `x ↦ w(x − y)`.
    pub fn translate(&self, y: &LatticePoint) -> LatticeSignal {
        LatticeSignal {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(x, v)| (x + y, v.clone()))
                .collect(),
        }
    }

    /// `w̃(x) = conj(w(−x))`.
    pub fn conj_reflect(&self) -> LatticeSignal {
        LatticeSignal {
            dim: self.dim,
            entries: self.entries.iter().map(|(x, v)| (-x, v.conj())).collect(),
        }
    }

    pub fn add(&self, other: &LatticeSignal) -> Result<LatticeSignal, LatticeError> {
        check_dim(self.dim, other.dim)?;
        Ok(LatticeSignal::accumulate(
            self.dim,
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|(x, v)| (x.clone(), v.clone())),
        ))
    }

    pub fn sub(&self, other: &LatticeSignal) -> Result<LatticeSignal, LatticeError> {
        self.add(&other.scale(&Scalar::from_int(-1, 0)))
    }

    /// Keeps only the entries whose point satisfies `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&LatticePoint) -> bool) -> LatticeSignal {
        LatticeSignal {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .filter(|(x, _)| keep(x))
                .map(|(x, v)| (x.clone(), v.clone()))
                .collect(),
        }
    }

    /// `⟨self, other⟩ = Σ self(x)·conj(other(x))`.
    pub fn inner(&self, other: &LatticeSignal) -> Result<Scalar, LatticeError> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .filter_map(|(x, v)| other.entries.get(x).map(|w| v * w.conj()))
            .fold(Scalar::zero(), |acc, t| acc + t))
    }

    /// Equality that is exact on exact values and tolerant (relative to the
    /// larger signal) once floats are involved.
    pub fn same_as(&self, other: &LatticeSignal) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let scale = self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE);
        let tol = tolerance::ASSOCIATION_REL * scale;
        let keys = self.entries.keys().chain(other.entries.keys());
        keys.into_iter()
            .all(|x| self.get(x).same_as(&other.get(x), tol))
    }

    pub fn to_float(&self) -> LatticeSignal {
        LatticeSignal {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(x, v)| (x.clone(), v.to_float()))
                .collect(),
        }
    }
}

pub(crate) fn check_point(dim: usize, x: &LatticePoint) -> Result<(), LatticeError> {
    check_dim(dim, x.dim())?;
    if let Some(&c) = x.coords().iter().find(|c| c.abs() > MAX_COORD) {
        return Err(LatticeError::CoordinateRange(c));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
pub(crate) struct EntryRepr {
    pub x: Vec<i64>,
    pub re: Part,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Part>,
}

impl EntryRepr {
    pub(crate) fn new(x: &LatticePoint, v: &Scalar) -> Self {
        let (re, im) = scalar_to_parts(v);
        EntryRepr {
            x: x.coords().to_vec(),
            re,
            im: Some(im),
        }
    }

    pub(crate) fn decode(&self) -> Result<(LatticePoint, Scalar), LatticeError> {
        let v = scalar_from_parts(&self.re, self.im.as_ref())?;
        Ok((LatticePoint::new(self.x.clone()), v))
    }
}

#[derive(Serialize, Deserialize)]
struct SignalRepr {
    dim: usize,
    entries: Vec<EntryRepr>,
}

impl TryFrom<SignalRepr> for LatticeSignal {
    type Error = LatticeError;
    fn try_from(r: SignalRepr) -> Result<Self, LatticeError> {
        let decoded = r
            .entries
            .iter()
            .map(EntryRepr::decode)
            .collect::<Result<Vec<_>, _>>()?;
        LatticeSignal::from_entries(r.dim, decoded)
    }
}

impl From<LatticeSignal> for SignalRepr {
    fn from(s: LatticeSignal) -> Self {
        SignalRepr {
            dim: s.dim,
            entries: s.entries.iter().map(|(x, v)| EntryRepr::new(x, v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v, 0)
    }

    #[test]
    fn zeros_are_not_stored() {
        let w = LatticeSignal::from_values_1d(0, &[s(1), s(0), s(2)]);
        assert_eq!(w.len(), 2);
        assert_eq!(w.get(&LatticePoint::from(1)), Scalar::zero());
    }

    #[test]
    fn rejects_duplicates_and_bad_dims() {
        let dup = LatticeSignal::from_entries(1, [(0.into(), s(1)), (0.into(), s(2))]);
        assert!(matches!(dup, Err(LatticeError::DuplicatePoint(_))));
        let bad = LatticeSignal::from_entries(2, [(0.into(), s(1))]);
        assert!(matches!(bad, Err(LatticeError::DimensionMismatch { .. })));
        assert!(matches!(LatticeSignal::zero(0), Err(LatticeError::ZeroDimension)));
        let far = LatticeSignal::from_entries(1, [(LatticePoint::from(1i64 << 50), s(1))]);
        assert!(matches!(far, Err(LatticeError::CoordinateRange(_))));
    }

    #[test]
    fn float_cancellation_is_pruned() {
        let a = LatticeSignal::from_entries(1, [(0.into(), Scalar::float(1.0, 0.0)), (1.into(), Scalar::float(0.1 + 0.2, 0.0))]).unwrap();
        let b = LatticeSignal::from_entries(1, [(1.into(), Scalar::float(0.3, 0.0))]).unwrap();
        let d = a.sub(&b).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn conj_reflect_is_involution() {
        let w = LatticeSignal::from_values_1d(-1, &[Scalar::from_int(1, 2), s(3)]);
        assert_eq!(w.conj_reflect().conj_reflect(), w);
        assert_eq!(w.conj_reflect().get(&LatticePoint::from(1)), Scalar::from_int(1, -2));
    }

    #[test]
    fn json_shape() {
        let w = LatticeSignal::from_values_1d(0, &[s(1), Scalar::ratio(1, 2, -1, 1)]);
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains(r#""entries""#));
        assert!(text.contains(r#""1/2""#));
        let back: LatticeSignal = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        assert!(back.is_exact());
    }
}
