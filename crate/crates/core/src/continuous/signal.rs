use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{check_dim, BoxAtom, ContinuousError, RatPoint};
use crate::lattice::{LatticePoint, LatticeSignal};
use crate::scalar::{ratio_serde, Part, Scalar};
use crate::tolerance;

/// A finite sum `Σ c_k χ_{box_k}` of box indicators.
///
/// Atoms with identical geometry are merged. Distinct atoms may overlap only
/// when the signal was built by an operator or declared `overlapping`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSignal {
    dim: usize,
    atoms: BTreeMap<BoxAtom, Scalar>,
    overlapping: bool,
}

impl BoxSignal {
    pub fn zero(dim: usize) -> Result<Self, ContinuousError> {
        if dim == 0 {
            return Err(ContinuousError::ZeroDimension);
        }
        Ok(BoxSignal {
            dim,
            atoms: BTreeMap::new(),
            overlapping: false,
        })
    }

    /// Builds a signal, merging identical atoms. Overlaps between distinct
    /// atoms are an error unless `allow_overlap` is set.
    pub fn new<I>(dim: usize, atoms: I, allow_overlap: bool) -> Result<Self, ContinuousError>
    where
        I: IntoIterator<Item = (BoxAtom, Scalar)>,
    {
        if dim == 0 {
            return Err(ContinuousError::ZeroDimension);
        }
        let atoms: Vec<_> = atoms.into_iter().collect();
        for (a, c) in &atoms {
            check_dim(dim, a.dim())?;
            if !c.is_finite() {
                return Err(ContinuousError::NonFinite);
            }
        }
        let s = BoxSignal::accumulate(dim, atoms);
        if s.overlapping && !allow_overlap {
            return Err(ContinuousError::UndeclaredOverlap);
        }
        Ok(s)
    }

    pub(crate) fn accumulate<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (BoxAtom, Scalar)>,
    {
        let mut atoms: BTreeMap<BoxAtom, Scalar> = BTreeMap::new();
        for (a, c) in terms {
            match atoms.entry(a) {
                Entry::Occupied(mut e) => {
                    let sum = &*e.get() + &c;
                    *e.get_mut() = sum;
                }
                Entry::Vacant(e) => {
                    e.insert(c);
                }
            }
        }
        let max = atoms.values().map(Scalar::abs).fold(0.0, f64::max);
        let threshold = tolerance::ZERO_PRUNE_REL * max;
        atoms.retain(|_, c| match c {
            Scalar::Exact(z) => !z.is_zero(),
            Scalar::Float(z) => z.norm() > threshold,
        });
        let overlapping = has_overlap(&atoms);
        BoxSignal {
            dim,
            atoms,
            overlapping,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &BTreeMap<BoxAtom, Scalar> {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Some pair of distinct atoms overlaps.
    pub fn is_overlapping(&self) -> bool {
        self.overlapping
    }

    pub fn is_exact(&self) -> bool {
        self.atoms.values().all(Scalar::is_exact)
    }

    /// Every atom has the same halfwidth vector.
    pub fn uniform_halfwidth(&self) -> Option<&RatPoint> {
        let mut it = self.atoms.keys().map(BoxAtom::halfwidth);
        let first = it.next()?;
        it.all(|h| h == first).then_some(first)
    }

    pub fn min_halfwidth(&self) -> Option<f64> {
        self.atoms
            .keys()
            .flat_map(BoxAtom::halfwidth_f64)
            .reduce(f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.atoms.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn coef(&self, atom: &BoxAtom) -> Scalar {
        self.atoms.get(atom).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Σ_k c_k χ_k(x)` at a point (boxes are open).
    pub fn value_at(&self, x: &[f64]) -> Scalar {
        self.atoms
            .iter()
            .filter(|(a, _)| {
                let (c, h) = (a.center_f64(), a.halfwidth_f64());
                (0..self.dim).all(|j| (x[j] - c[j]).abs() < h[j])
            })
            .fold(Scalar::zero(), |acc, (_, v)| acc + v.clone())
    }

    pub fn scale(&self, c: &Scalar) -> BoxSignal {
        BoxSignal::accumulate(self.dim, self.atoms.iter().map(|(a, v)| (a.clone(), c * v)))
    }

    /// `x ↦ w(x − y)`.
    pub fn translate(&self, y: &[BigRational]) -> BoxSignal {
        BoxSignal {
            dim: self.dim,
            atoms: self
                .atoms
                .iter()
                .map(|(a, v)| (a.translated(y), v.clone()))
                .collect(),
            overlapping: self.overlapping,
        }
    }

    /// `w̃(x) = conj(w(−x))`.
    pub fn conj_reflect(&self) -> BoxSignal {
        BoxSignal {
            dim: self.dim,
            atoms: self
                .atoms
                .iter()
                .map(|(a, v)| (a.reflected(), v.conj()))
                .collect(),
            overlapping: self.overlapping,
        }
    }

    pub fn add(&self, other: &BoxSignal) -> Result<BoxSignal, ContinuousError> {
        check_dim(self.dim, other.dim)?;
        Ok(BoxSignal::accumulate(
            self.dim,
            self.atoms
                .iter()
                .chain(other.atoms.iter())
                .map(|(a, v)| (a.clone(), v.clone())),
        ))
    }

    pub fn sub(&self, other: &BoxSignal) -> Result<BoxSignal, ContinuousError> {
        self.add(&other.scale(&Scalar::from_int(-1, 0)))
    }

    /// Keeps the atoms selected by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&BoxAtom) -> bool) -> BoxSignal {
        let atoms: BTreeMap<_, _> = self
            .atoms
            .iter()
            .filter(|(a, _)| keep(a))
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect();
        let overlapping = has_overlap(&atoms);
        BoxSignal {
            dim: self.dim,
            atoms,
            overlapping,
        }
    }

    /// Atom-wise equality: exact for exact coefficients, tolerant otherwise.
    pub fn same_as(&self, other: &BoxSignal) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let scale = self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE);
        let tol = tolerance::ASSOCIATION_REL * scale;
        self.atoms
            .keys()
            .chain(other.atoms.keys())
            .all(|a| self.coef(a).same_as(&other.coef(a), tol))
    }
}

fn has_overlap(atoms: &BTreeMap<BoxAtom, Scalar>) -> bool {
    let keys: Vec<&BoxAtom> = atoms.keys().collect();
    keys.iter()
        .enumerate()
        .any(|(i, a)| keys[i + 1..].iter().any(|b| a.overlaps(b)))
}

/// A signal on `R^d`: either a sum of box atoms or a delta train
/// `Σ v(y) δ(x − y)` carried by a lattice signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContinuousRepr", into = "ContinuousRepr")]
pub enum ContinuousSignal {
    Boxes(BoxSignal),
    Train(LatticeSignal),
}

impl From<BoxSignal> for ContinuousSignal {
    fn from(b: BoxSignal) -> Self {
        ContinuousSignal::Boxes(b)
    }
}

impl From<LatticeSignal> for ContinuousSignal {
    fn from(v: LatticeSignal) -> Self {
        ContinuousSignal::Train(v)
    }
}

impl ContinuousSignal {
    pub fn delta_train(v: LatticeSignal) -> Self {
        ContinuousSignal::Train(v)
    }

    pub fn dim(&self) -> usize {
        match self {
            ContinuousSignal::Boxes(b) => b.dim(),
            ContinuousSignal::Train(v) => v.dim(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ContinuousSignal::Boxes(b) => b.is_empty(),
            ContinuousSignal::Train(v) => v.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            ContinuousSignal::Boxes(b) => b.is_exact(),
            ContinuousSignal::Train(v) => v.is_exact(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ContinuousSignal::Boxes(b) => b.len(),
            ContinuousSignal::Train(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_boxes(&self) -> Option<&BoxSignal> {
        match self {
            ContinuousSignal::Boxes(b) => Some(b),
            ContinuousSignal::Train(_) => None,
        }
    }

    pub fn as_train(&self) -> Option<&LatticeSignal> {
        match self {
            ContinuousSignal::Train(v) => Some(v),
            ContinuousSignal::Boxes(_) => None,
        }
    }

    pub fn scale(&self, c: &Scalar) -> ContinuousSignal {
        match self {
            ContinuousSignal::Boxes(b) => b.scale(c).into(),
            ContinuousSignal::Train(v) => v.scale(c).into(),
        }
    }

    /// `x ↦ w(x − y)`; a delta train only moves by lattice vectors.
    pub fn translate(&self, y: &[BigRational]) -> Result<ContinuousSignal, ContinuousError> {
        check_dim(self.dim(), y.len())?;
        Ok(match self {
            ContinuousSignal::Boxes(b) => b.translate(y).into(),
            ContinuousSignal::Train(v) => v.translate(&lattice_offset(y)?).into(),
        })
    }

    pub fn conj_reflect(&self) -> ContinuousSignal {
        match self {
            ContinuousSignal::Boxes(b) => b.conj_reflect().into(),
            ContinuousSignal::Train(v) => v.conj_reflect().into(),
        }
    }

    pub fn add(&self, other: &ContinuousSignal) -> Result<ContinuousSignal, ContinuousError> {
        match (self, other) {
            (ContinuousSignal::Boxes(a), ContinuousSignal::Boxes(b)) => Ok(a.add(b)?.into()),
            (ContinuousSignal::Train(a), ContinuousSignal::Train(b)) => Ok(a.add(b)?.into()),
            _ => Err(ContinuousError::MixedRepresentation),
        }
    }

    pub fn sub(&self, other: &ContinuousSignal) -> Result<ContinuousSignal, ContinuousError> {
        self.add(&other.scale(&Scalar::from_int(-1, 0)))
    }

    pub fn same_as(&self, other: &ContinuousSignal) -> bool {
        match (self, other) {
            (ContinuousSignal::Boxes(a), ContinuousSignal::Boxes(b)) => a.same_as(b),
            (ContinuousSignal::Train(a), ContinuousSignal::Train(b)) => a.same_as(b),
            _ => self.is_zero() && other.is_zero() && self.dim() == other.dim(),
        }
    }
}

/// The integer point with the given rational coordinates.
pub(crate) fn lattice_offset(y: &[BigRational]) -> Result<LatticePoint, ContinuousError> {
    if y.iter().any(|c| !c.is_integer()) {
        return Err(ContinuousError::NonLatticeOffset(
            y.iter().map(ToString::to_string).collect(),
        ));
    }
    super::check_coords(y)?;
    let coords = y
        .iter()
        .map(|c| {
            let n = c.to_integer();
            i64::try_from(n).map_err(|_| ContinuousError::CoordinateRange)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LatticePoint::new(coords))
}

#[derive(Serialize, Deserialize)]
struct AtomRepr {
    coef: Scalar,
    center: Vec<Part>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    halfwidth: Option<Vec<Part>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<Part>,
}

#[derive(Serialize, Deserialize)]
struct ContinuousRepr {
    dim: usize,
    #[serde(default)]
    atoms: Option<Vec<AtomRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    train: Option<LatticeSignal>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    overlapping: bool,
}

fn parts_to_rat(parts: &[Part]) -> Result<RatPoint, ContinuousError> {
    Ok(parts
        .iter()
        .map(ratio_serde::part_to_ratio)
        .collect::<Result<Vec<_>, _>>()?)
}

impl TryFrom<ContinuousRepr> for ContinuousSignal {
    type Error = ContinuousError;
    fn try_from(r: ContinuousRepr) -> Result<Self, ContinuousError> {
        match (r.atoms, r.train) {
            (Some(atoms), None) => {
                let mut decoded = Vec::with_capacity(atoms.len());
                for a in &atoms {
                    let center = parts_to_rat(&a.center)?;
                    check_dim(r.dim, center.len())?;
                    let atom = match (&a.halfwidth, &a.radius) {
                        (Some(h), None) => BoxAtom::new(center, parts_to_rat(h)?)?,
                        (None, Some(rad)) => {
                            BoxAtom::ball(center, ratio_serde::part_to_ratio(rad)?)?
                        }
                        _ => return Err(ContinuousError::AtomShape),
                    };
                    decoded.push((atom, a.coef.clone()));
                }
                Ok(BoxSignal::new(r.dim, decoded, r.overlapping)?.into())
            }
            (None, Some(train)) => {
                check_dim(r.dim, train.dim())?;
                Ok(ContinuousSignal::Train(train))
            }
            _ => Err(ContinuousError::Representation),
        }
    }
}

impl From<ContinuousSignal> for ContinuousRepr {
    fn from(s: ContinuousSignal) -> Self {
        let to_parts = |v: &RatPoint| v.iter().map(Part::from_ratio).collect::<Vec<_>>();
        match s {
            ContinuousSignal::Boxes(b) => ContinuousRepr {
                dim: b.dim,
                atoms: Some(
                    b.atoms
                        .iter()
                        .map(|(a, c)| AtomRepr {
                            coef: c.clone(),
                            center: to_parts(a.center()),
                            halfwidth: Some(to_parts(a.halfwidth())),
                            radius: None,
                        })
                        .collect(),
                ),
                train: None,
                overlapping: b.overlapping,
            },
            ContinuousSignal::Train(v) => ContinuousRepr {
                dim: v.dim(),
                atoms: None,
                train: Some(v),
                overlapping: false,
            },
        }
    }
}
