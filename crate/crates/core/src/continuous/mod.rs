//! Signals on `R^d` built from complex-weighted box atoms, delta trains on
//! `Z^d`, stencils with real offsets, and closed-form Fourier transforms.

mod atom;
mod signal;
mod stencil;
mod transform;

pub use atom::{BoxAtom, RatPoint};
pub use signal::{BoxSignal, ContinuousSignal};
pub(crate) use signal::lattice_offset;
pub use stencil::{apply_continuous, apply_continuous_adjoint, ContinuousStencil};
pub use transform::{
    apply_witness, exact_magnitude, find_continuous_association, ft_eval, lattice_reduce,
    pointwise_modulus_equal, sampled_magnitude, sampled_magnitude_equal, SampledComparison,
};

use num::rational::BigRational;
use num::Signed;
use thiserror::Error;

use crate::lattice::{LatticeError, MAX_COORD};
use crate::scalar::{ratio_to_f64, ScalarParseError};

/// Largest number of grid points a sampled comparison will evaluate.
pub const MAX_GRID_POINTS: usize = 1 << 22;

#[derive(Debug, Error)]
pub enum ContinuousError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("box halfwidths must be strictly positive")]
    NonPositiveHalfwidth,
    #[error("ball atoms are only supported in one dimension (got dimension {0}); use box atoms")]
    BallAtomDimension(usize),
    #[error("atom needs exactly one of `halfwidth` or `radius`")]
    AtomShape,
    #[error("coordinate outside the supported range ±2^40")]
    CoordinateRange,
    #[error("distinct atoms overlap but the signal does not declare `overlapping: true`")]
    UndeclaredOverlap,
    #[error("pointwise comparison needs pairwise disjoint atoms")]
    OverlappingAtoms,
    #[error("association is undecidable for overlapping atoms of unequal size")]
    AmbiguousRepresentation,
    #[error("signal is not a delta train")]
    NotDeltaTrain,
    #[error("offset {0:?} does not lie on the integer lattice")]
    NonLatticeOffset(Vec<String>),
    #[error("signals use different representations (boxes vs delta train)")]
    MixedRepresentation,
    #[error("signal must have exactly one of `atoms` or `train`")]
    Representation,
    #[error("grid must have at least 2 points per axis")]
    DegenerateGrid,
    #[error("grid of {0} points exceeds the supported maximum")]
    GridTooLarge(usize),
    #[error("stencil has no taps")]
    EmptyStencil,
    #[error("stencil tap has a zero coefficient")]
    ZeroTap,
    #[error("duplicate stencil offset")]
    DuplicateOffset,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("operation requires a nonzero signal")]
    ZeroSignal,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), ContinuousError> {
    if expected == found {
        Ok(())
    } else {
        Err(ContinuousError::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_coords(v: &[BigRational]) -> Result<(), ContinuousError> {
    let bound = BigRational::from_integer(MAX_COORD.into());
    if v.iter().any(|c| c.abs() > bound) {
        return Err(ContinuousError::CoordinateRange);
    }
    Ok(())
}

pub(crate) fn rat_to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(ratio_to_f64).collect()
}

pub(crate) fn rat_add(a: &[BigRational], b: &[BigRational]) -> RatPoint {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn rat_sub(a: &[BigRational], b: &[BigRational]) -> RatPoint {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn rat_neg(a: &[BigRational]) -> RatPoint {
    a.iter().map(|x| -x).collect()
}
