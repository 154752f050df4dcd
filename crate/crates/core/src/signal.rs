//! A single signal/operator type covering the lattice and the continuous
//! setting, so constructions and claims are written once.

use std::collections::BTreeSet;

use num::rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::continuous::{
    self, apply_continuous, apply_continuous_adjoint, BoxSignal, ContinuousError,
    ContinuousSignal, ContinuousStencil, RatPoint,
};
use crate::geometry::{ConvexBody, GeometryError};
use crate::lattice::{
    self, AssociationKind, AssociationWitness, LatticeError, LatticePoint, LatticeSignal,
    MagnitudeComparison, Stencil,
};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Continuous(#[from] ContinuousError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("signals live in different settings (discrete vs continuous)")]
    ModeMismatch,
    #[error("offset {0:?} is not an integer point")]
    NonLatticeOffset(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Discrete,
    Continuous,
}

/// A signal on `Z^d` or on `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Signal {
    Discrete(LatticeSignal),
    Continuous(ContinuousSignal),
}

/// A finite difference operator on `Z^d` or on `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Operator {
    Discrete(Stencil),
    Continuous(ContinuousStencil),
}

/// Outcome of a Fourier-magnitude comparison, by whichever route applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MagnitudeCheck {
    ExactAutocorrelation(MagnitudeComparison),
    Sampled(continuous::SampledComparison),
}

impl MagnitudeCheck {
    pub fn equal(&self) -> bool {
        match self {
            MagnitudeCheck::ExactAutocorrelation(c) => c.equal,
            MagnitudeCheck::Sampled(s) => s.equal,
        }
    }
}

pub(crate) fn lattice_point(y: &[BigRational]) -> Result<LatticePoint, SignalError> {
    Ok(continuous::lattice_offset(y)?)
}

pub(crate) fn rat_point(x: &LatticePoint) -> RatPoint {
    x.coords().iter().map(|&c| BigRational::from_integer(c.into())).collect()
}

pub(crate) fn rat_f64(y: &[BigRational]) -> Vec<f64> {
    y.iter().map(crate::scalar::ratio_to_f64).collect()
}

impl Signal {
    pub fn mode(&self) -> Mode {
        match self {
            Signal::Discrete(_) => Mode::Discrete,
            Signal::Continuous(_) => Mode::Continuous,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Signal::Discrete(v) => v.dim(),
            Signal::Continuous(w) => w.dim(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Signal::Discrete(v) => v.is_zero(),
            Signal::Continuous(w) => w.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Signal::Discrete(v) => v.is_exact(),
            Signal::Continuous(w) => w.is_exact(),
        }
    }

    /// Number of stored points or atoms.
    pub fn len(&self) -> usize {
        match self {
            Signal::Discrete(v) => v.len(),
            Signal::Continuous(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn scale(&self, c: &Scalar) -> Signal {
        match self {
            Signal::Discrete(v) => Signal::Discrete(v.scale(c)),
            Signal::Continuous(w) => Signal::Continuous(w.scale(c)),
        }
    }

    /// `x ↦ w(x − y)`.
    pub fn translate(&self, y: &[BigRational]) -> Result<Signal, SignalError> {
        match self {
            Signal::Discrete(v) => {
                lattice::check_dim(v.dim(), y.len())?;
                Ok(Signal::Discrete(v.translate(&lattice_point(y)?)))
            }
            Signal::Continuous(w) => Ok(Signal::Continuous(w.translate(y)?)),
        }
    }

    /// `w̃(x) = conj(w(−x))`.
    pub fn conj_reflect(&self) -> Signal {
        match self {
            Signal::Discrete(v) => Signal::Discrete(v.conj_reflect()),
            Signal::Continuous(w) => Signal::Continuous(w.conj_reflect()),
        }
    }

    pub fn add(&self, other: &Signal) -> Result<Signal, SignalError> {
        match (self, other) {
            (Signal::Discrete(a), Signal::Discrete(b)) => Ok(Signal::Discrete(a.add(b)?)),
            (Signal::Continuous(a), Signal::Continuous(b)) => Ok(Signal::Continuous(a.add(b)?)),
            _ => Err(SignalError::ModeMismatch),
        }
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal, SignalError> {
        self.add(&other.scale(&Scalar::from_int(-1, 0)))
    }

    /// Exact on exact data, tolerant otherwise.
    pub fn same_as(&self, other: &Signal) -> bool {
        match (self, other) {
            (Signal::Discrete(a), Signal::Discrete(b)) => a.same_as(b),
            (Signal::Continuous(a), Signal::Continuous(b)) => a.same_as(b),
            _ => false,
        }
    }

    /// `|f̂|² ≡ |ĝ|² ≢ 0`: exact through autocorrelations when possible,
    /// otherwise sampled on `grid^d` points.
    pub fn magnitude_check(&self, other: &Signal, grid: usize) -> Result<MagnitudeCheck, SignalError> {
        match (self, other) {
            (Signal::Discrete(a), Signal::Discrete(b)) => Ok(MagnitudeCheck::ExactAutocorrelation(
                lattice::compare_fourier_magnitude(a, b)?,
            )),
            (Signal::Continuous(a), Signal::Continuous(b)) => {
                match continuous::exact_magnitude(a, b)? {
                    Some(c) => Ok(MagnitudeCheck::ExactAutocorrelation(c)),
                    None => Ok(MagnitudeCheck::Sampled(continuous::sampled_magnitude(a, b, grid)?)),
                }
            }
            _ => Err(SignalError::ModeMismatch),
        }
    }

    /// Searches for a shift or conjugate-reflection witness, optionally of
    /// one kind only.
    pub fn association(
        &self,
        other: &Signal,
        kind: Option<AssociationKind>,
    ) -> Result<Option<AssociationWitness<RatPoint>>, SignalError> {
        let to_rat = |w: AssociationWitness| AssociationWitness {
            kind: w.kind,
            phase: w.phase,
            alpha: w.alpha,
            shift: rat_point(&w.shift),
        };
        match (self, other) {
            (Signal::Discrete(a), Signal::Discrete(b)) => Ok(match kind {
                Some(k) => lattice::find_association_of_kind(a, b, k)?,
                None => lattice::find_association(a, b)?,
            }
            .map(to_rat)),
            (Signal::Continuous(a), Signal::Continuous(b)) => {
                let w = continuous::find_continuous_association(a, b)?;
                Ok(match (w, kind) {
                    (Some(w), Some(k)) if w.kind != k => {
                        // The shift search ran first; look for the requested kind too.
                        continuous_kind(a, b, k)?
                    }
                    (None, _) => None,
                    (w, _) => w,
                })
            }
            _ => Err(SignalError::ModeMismatch),
        }
    }

    pub fn is_self_conj_associated(&self) -> Result<bool, SignalError> {
        Ok(self.association(self, Some(AssociationKind::ConjReflect))?.is_some())
    }

    pub fn pointwise_modulus_equal(&self, other: &Signal) -> Result<bool, SignalError> {
        match (self, other) {
            (Signal::Discrete(a), Signal::Discrete(b)) => Ok(continuous::pointwise_modulus_equal(
                &a.clone().into(),
                &b.clone().into(),
            )?),
            (Signal::Continuous(a), Signal::Continuous(b)) => {
                Ok(continuous::pointwise_modulus_equal(a, b)?)
            }
            _ => Err(SignalError::ModeMismatch),
        }
    }

    /// The support as a list of closed pieces (points or boxes).
    pub fn support_pieces(&self) -> Result<Vec<ConvexBody>, SignalError> {
        let points = |v: &LatticeSignal| -> Result<Vec<ConvexBody>, SignalError> {
            v.support()
                .map(|x| Ok(ConvexBody::point(x.to_f64())?))
                .collect()
        };
        match self {
            Signal::Discrete(v) | Signal::Continuous(ContinuousSignal::Train(v)) => points(v),
            Signal::Continuous(ContinuousSignal::Boxes(b)) => b
                .atoms()
                .keys()
                .map(|a| Ok(ConvexBody::from_atom(a)?))
                .collect(),
        }
    }

    /// Every support piece lies in the body. Points must lie in the open
    /// body; boxes are open, so their closures must lie in the closed body.
    pub fn support_within(&self, body: &ConvexBody) -> Result<bool, SignalError> {
        for piece in self.support_pieces()? {
            if !piece_within(&piece, body)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every support piece lies in one of the bodies.
    pub fn support_within_union(&self, bodies: &[ConvexBody]) -> Result<bool, SignalError> {
        for piece in self.support_pieces()? {
            let mut inside = false;
            for b in bodies {
                if piece_within(&piece, b)? {
                    inside = true;
                    break;
                }
            }
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `χ_K · w`: keeps the points/atoms lying in `K`.
    pub fn mask(&self, body: &ConvexBody) -> Result<Signal, SignalError> {
        let mut err = None;
        let mut keep_point = |x: &LatticePoint| match body.contains_open(&x.to_f64()) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                false
            }
        };
        let out = match self {
            Signal::Discrete(v) => Signal::Discrete(v.restrict(&mut keep_point)),
            Signal::Continuous(ContinuousSignal::Train(v)) => {
                Signal::Continuous(ContinuousSignal::Train(v.restrict(&mut keep_point)))
            }
            Signal::Continuous(ContinuousSignal::Boxes(b)) => {
                let mut geo_err = None;
                let kept = b.restrict(|a| {
                    match ConvexBody::from_atom(a).and_then(|p| body.contains_body(&p)) {
                        Ok(v) => v,
                        Err(e) => {
                            geo_err = Some(e);
                            false
                        }
                    }
                });
                if let Some(e) = geo_err {
                    return Err(e.into());
                }
                Signal::Continuous(ContinuousSignal::Boxes(kept))
            }
        };
        match err {
            Some(e) => Err(e.into()),
            None => Ok(out),
        }
    }

    /// The translates `supp w − y`, `y ∈ offsets`, are pairwise disjoint.
    pub fn translates_disjoint(&self, offsets: &[RatPoint]) -> Result<bool, SignalError> {
        match self {
            Signal::Discrete(v) | Signal::Continuous(ContinuousSignal::Train(v)) => {
                let mut seen = BTreeSet::new();
                for y in offsets {
                    let y = lattice_point(y)?;
                    for x in v.support() {
                        if !seen.insert(x - &y) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Signal::Continuous(ContinuousSignal::Boxes(b)) => {
                let moved: Vec<Vec<_>> = offsets
                    .iter()
                    .map(|y| {
                        let minus: RatPoint = y.iter().map(|c| -c).collect();
                        b.atoms().keys().map(|a| a.translated(&minus)).collect()
                    })
                    .collect();
                for i in 0..moved.len() {
                    for j in i + 1..moved.len() {
                        if moved[i].iter().any(|a| moved[j].iter().any(|c| a.overlaps(c))) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn as_discrete(&self) -> Option<&LatticeSignal> {
        match self {
            Signal::Discrete(v) => Some(v),
            Signal::Continuous(_) => None,
        }
    }

    pub fn as_continuous(&self) -> Option<&ContinuousSignal> {
        match self {
            Signal::Continuous(w) => Some(w),
            Signal::Discrete(_) => None,
        }
    }
}

fn continuous_kind(
    a: &ContinuousSignal,
    b: &ContinuousSignal,
    kind: AssociationKind,
) -> Result<Option<AssociationWitness<RatPoint>>, SignalError> {
    match (a, b) {
        (ContinuousSignal::Boxes(x), ContinuousSignal::Boxes(y)) => {
            Ok(lattice::search_association(x.atoms(), y.atoms(), kind))
        }
        (ContinuousSignal::Train(x), ContinuousSignal::Train(y)) => {
            Ok(lattice::find_association_of_kind(x, y, kind)?.map(|w| AssociationWitness {
                kind: w.kind,
                phase: w.phase,
                alpha: w.alpha,
                shift: rat_point(&w.shift),
            }))
        }
        _ => Ok(None),
    }
}

fn piece_within(piece: &ConvexBody, body: &ConvexBody) -> Result<bool, SignalError> {
    if piece.vertices().len() == 1 && piece.radius() == 0.0 {
        Ok(body.contains_open(&piece.vertices()[0])?)
    } else {
        Ok(body.contains_body(piece)?)
    }
}

impl Operator {
    pub fn mode(&self) -> Mode {
        match self {
            Operator::Discrete(_) => Mode::Discrete,
            Operator::Continuous(_) => Mode::Continuous,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Operator::Discrete(s) => s.dim(),
            Operator::Continuous(s) => s.dim(),
        }
    }

    /// The taps with rational offsets.
    pub fn rational(&self) -> ContinuousStencil {
        match self {
            Operator::Discrete(s) => ContinuousStencil::from_lattice(s),
            Operator::Continuous(s) => s.clone(),
        }
    }

    pub fn offsets(&self) -> Vec<RatPoint> {
        self.rational().taps().keys().cloned().collect()
    }

    pub fn coef(&self, y: &RatPoint) -> Option<Scalar> {
        self.rational().coef(y).cloned()
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Operator::Discrete(s) => s.is_symmetric(),
            Operator::Continuous(s) => s.is_symmetric(),
        }
    }

    /// `σ` is conjugate-associated to itself.
    pub fn kernel_self_conj_associated(&self) -> bool {
        match self {
            Operator::Discrete(s) => {
                lattice::is_self_conj_associated(&s.symbol_signal()).expect("kernel is nonzero")
            }
            Operator::Continuous(s) => s.kernel_is_self_conj_associated(),
        }
    }

    fn check_mode(&self, w: &Signal) -> Result<(), SignalError> {
        if self.mode() == w.mode() {
            Ok(())
        } else {
            Err(SignalError::ModeMismatch)
        }
    }

    /// `Σ a_y ψ(· + y)`.
    pub fn apply(&self, w: &Signal) -> Result<Signal, SignalError> {
        self.check_mode(w)?;
        match (self, w) {
            (Operator::Discrete(s), Signal::Discrete(v)) => {
                Ok(Signal::Discrete(lattice::apply_stencil(s, v)?))
            }
            (Operator::Continuous(s), Signal::Continuous(v)) => {
                Ok(Signal::Continuous(apply_continuous(s, v)?))
            }
            _ => Err(SignalError::ModeMismatch),
        }
    }

    /// `Σ conj(a_y) ψ(· − y)`.
    pub fn apply_adjoint(&self, w: &Signal) -> Result<Signal, SignalError> {
        self.check_mode(w)?;
        match (self, w) {
            (Operator::Discrete(s), Signal::Discrete(v)) => {
                Ok(Signal::Discrete(lattice::apply_adjoint(s, v)?))
            }
            (Operator::Continuous(s), Signal::Continuous(v)) => {
                Ok(Signal::Continuous(apply_continuous_adjoint(s, v)?))
            }
            _ => Err(SignalError::ModeMismatch),
        }
    }

    /// Builds an operator in the given mode from rational offsets.
    pub fn from_taps(
        mode: Mode,
        dim: usize,
        taps: Vec<(RatPoint, Scalar)>,
    ) -> Result<Operator, SignalError> {
        match mode {
            Mode::Discrete => {
                let taps = taps
                    .into_iter()
                    .map(|(y, a)| Ok((lattice_point(&y)?, a)))
                    .collect::<Result<Vec<_>, SignalError>>()?;
                Ok(Operator::Discrete(Stencil::new(dim, taps)?))
            }
            Mode::Continuous => Ok(Operator::Continuous(ContinuousStencil::new(dim, taps)?)),
        }
    }
}

impl From<BoxSignal> for Signal {
    fn from(b: BoxSignal) -> Self {
        Signal::Continuous(b.into())
    }
}

impl From<LatticeSignal> for Signal {
    fn from(v: LatticeSignal) -> Self {
        Signal::Discrete(v)
    }
}
