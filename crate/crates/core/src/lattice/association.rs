//! Search for trivial ambiguities: modulated shifts `e^{iα} w(x − y)` and
//! modulated conjugate reflections `e^{iα} conj(w(−x + y))`.
//!
//! Both maps preserve the lexicographic order of supports up to a
//! translation, so aligning the minimal support points forces `y` and the
//! value ratio there forces `e^{iα}`. One candidate per kind is then
//! verified on the whole support.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::{check_dim, LatticeError, LatticePoint, LatticeSignal};
use crate::scalar::Scalar;
use crate::tolerance;

/// A support key that can be translated and reflected through the origin.
///
/// Translation must preserve the key order.
pub trait Placement: Ord + Clone {
    type Offset: Clone + Debug + PartialEq;

    /// The `y` with `self + y == to`, if one exists.
    fn offset_to(&self, to: &Self) -> Option<Self::Offset>;
    fn translated(&self, by: &Self::Offset) -> Self;
    fn negated(&self) -> Self;
}

impl Placement for LatticePoint {
    type Offset = LatticePoint;

    fn offset_to(&self, to: &Self) -> Option<LatticePoint> {
        (self.dim() == to.dim()).then(|| to - self)
    }

    fn translated(&self, by: &LatticePoint) -> LatticePoint {
        self + by
    }

    fn negated(&self) -> LatticePoint {
        -self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssociationKind {
    /// `g(x) = e^{iα} f(x − y)`
    Shift,
    /// `g(x) = e^{iα} conj(f(−x + y))`
    ConjReflect,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociationWitness<O = LatticePoint> {
    pub kind: AssociationKind,
    /// The unit ratio `e^{iα}`; exact when both signals are exact.
    pub phase: Scalar,
    /// `α ∈ [0, 2π)`.
    pub alpha: f64,
    pub shift: O,
}

impl AssociationWitness<LatticePoint> {
    /// Applies the witness to `f`; reproduces the target signal.
    pub fn apply(&self, f: &LatticeSignal) -> LatticeSignal {
        match self.kind {
            AssociationKind::Shift => f.translate(&self.shift).scale(&self.phase),
            AssociationKind::ConjReflect => {
                f.conj_reflect().translate(&self.shift).scale(&self.phase)
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == AssociationKind::Shift && self.shift.is_origin() && self.phase == Scalar::one()
    }
}

/// Runs the one-candidate search of the given kind over two nonzero maps.
pub fn search_association<K: Placement>(
    f: &BTreeMap<K, Scalar>,
    g: &BTreeMap<K, Scalar>,
    kind: AssociationKind,
) -> Option<AssociationWitness<K::Offset>> {
    if f.len() != g.len() || f.is_empty() {
        return None;
    }
    let exact = f.values().chain(g.values()).all(Scalar::is_exact);
    let scale = f
        .values()
        .chain(g.values())
        .map(Scalar::abs)
        .fold(0.0, f64::max);
    let tol = tolerance::ASSOCIATION_REL * scale;
    let close = |a: &Scalar, b: &Scalar| if exact { a == b } else { a.same_as(b, tol) };

    let (g_min, g_val) = g.iter().next()?;
    let (shift, phase) = match kind {
        AssociationKind::Shift => {
            let (f_min, f_val) = f.iter().next()?;
            (f_min.offset_to(g_min)?, g_val.checked_div(f_val)?)
        }
        AssociationKind::ConjReflect => {
            let (anchor, f_val) = f
                .iter()
                .map(|(k, v)| (k.negated(), v))
                .min_by(|a, b| a.0.cmp(&b.0))?;
            (anchor.offset_to(g_min)?, g_val.checked_div(&f_val.conj())?)
        }
    };
    if !phase.is_unit() {
        return None;
    }
    let ok = f.iter().all(|(k, v)| {
        let (target, expected) = match kind {
            AssociationKind::Shift => (k.translated(&shift), &phase * v),
            AssociationKind::ConjReflect => (k.negated().translated(&shift), &phase * v.conj()),
        };
        g.get(&target).is_some_and(|w| close(w, &expected))
    });
    ok.then(|| AssociationWitness {
        kind,
        alpha: phase.arg(),
        phase,
        shift,
    })
}

fn check_pair(f: &LatticeSignal, g: &LatticeSignal) -> Result<(), LatticeError> {
    check_dim(f.dim(), g.dim())?;
    if f.is_zero() || g.is_zero() {
        return Err(LatticeError::ZeroSignal);
    }
    Ok(())
}

/// A witness that `g` is associated to `f`, trying shifts first.
pub fn find_association(
    f: &LatticeSignal,
    g: &LatticeSignal,
) -> Result<Option<AssociationWitness>, LatticeError> {
    check_pair(f, g)?;
    Ok(search_association(f.entries(), g.entries(), AssociationKind::Shift)
        .or_else(|| search_association(f.entries(), g.entries(), AssociationKind::ConjReflect)))
}

pub fn find_association_of_kind(
    f: &LatticeSignal,
    g: &LatticeSignal,
    kind: AssociationKind,
) -> Result<Option<AssociationWitness>, LatticeError> {
    check_pair(f, g)?;
    Ok(search_association(f.entries(), g.entries(), kind))
}

/// `w = e^{iα} conj(w(−· + y))` for some `α`, `y`.
pub fn is_self_conj_associated(w: &LatticeSignal) -> Result<bool, LatticeError> {
    Ok(find_association_of_kind(w, w, AssociationKind::ConjReflect)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v, 0)
    }

    fn sample_2d() -> LatticeSignal {
        LatticeSignal::from_entries(
            2,
            [
                (vec![0, 0].into(), Scalar::from_int(1, 1)),
                (vec![1, 0].into(), s(3)),
                (vec![0, 2].into(), Scalar::ratio(1, 2, -2, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn finds_constructed_shift() {
        let f = sample_2d().to_float();
        let phase = Scalar::unit_from_angle(PI / 3.0);
        let y = LatticePoint::from(vec![2, 5]);
        let g = f.translate(&y).scale(&phase);
        let w = find_association(&f, &g).unwrap().unwrap();
        assert_eq!(w.kind, AssociationKind::Shift);
        assert_eq!(w.shift, y);
        assert!((w.alpha - PI / 3.0).abs() < 1e-12);
        assert!(w.apply(&f).same_as(&g));
    }

    #[test]
    fn finds_conj_reflection() {
        let f = sample_2d();
        let w = find_association(&f, &f.conj_reflect()).unwrap().unwrap();
        assert_eq!(w.kind, AssociationKind::ConjReflect);
        assert_eq!(w.shift, LatticePoint::origin(2));
        assert_eq!(w.phase, Scalar::one());
        assert_eq!(w.alpha, 0.0);
    }

    #[test]
    fn exact_rational_phase() {
        let f = sample_2d();
        let phase = Scalar::ratio(3, 5, 4, 5);
        let g = f.conj_reflect().translate(&vec![-1, 4].into()).scale(&phase);
        let w = find_association_of_kind(&f, &g, AssociationKind::ConjReflect)
            .unwrap()
            .unwrap();
        assert_eq!(w.phase, phase);
        assert_eq!(w.shift, LatticePoint::from(vec![-1, 4]));
        assert_eq!(w.apply(&f), g);
    }

    #[test]
    fn self_association_is_identity_shift() {
        let f = sample_2d();
        assert!(find_association(&f, &f).unwrap().unwrap().is_identity());
    }

    #[test]
    fn example_pair_is_not_associated() {
        let f = LatticeSignal::from_values_1d(-1, &[s(2), s(1), s(6), s(3)]);
        let g = LatticeSignal::from_values_1d(0, &[s(1), s(2), s(3), s(6)]);
        assert!(find_association(&f, &g).unwrap().is_none());
    }

    #[test]
    fn non_unit_ratio_is_rejected() {
        let f = sample_2d();
        assert!(find_association(&f, &f.scale(&s(2))).unwrap().is_none());
    }

    #[test]
    fn self_conj_association() {
        assert!(is_self_conj_associated(&LatticeSignal::delta(0.into(), s(1))).unwrap());
        let w = LatticeSignal::from_values_1d(0, &[s(1), s(3)]);
        assert!(!is_self_conj_associated(&w).unwrap());
        let sym = LatticeSignal::from_values_1d(4, &[Scalar::from_int(1, 2), s(5), Scalar::from_int(1, -2)]);
        assert!(is_self_conj_associated(&sym).unwrap());
    }

    #[test]
    fn zero_input_is_an_error() {
        let z = LatticeSignal::zero(1).unwrap();
        let f = LatticeSignal::delta(0.into(), s(1));
        assert!(matches!(find_association(&z, &f), Err(LatticeError::ZeroSignal)));
        assert!(matches!(is_self_conj_associated(&z), Err(LatticeError::ZeroSignal)));
    }
}
