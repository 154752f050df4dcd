//! Finitely supported signals on the integer lattice, stencil operators and
//! exact Fourier-magnitude comparison.

mod association;
mod autocorr;
mod fourier;
mod point;
mod signal;
mod stencil;

pub use association::{
    find_association, find_association_of_kind, is_self_conj_associated, search_association,
    AssociationKind, AssociationWitness, Placement,
};
pub use autocorr::{
    autocorrelation, compare_autocorrelations, compare_fourier_magnitude, equal_fourier_magnitude,
    Autocorrelation,
    LagMismatch, MagnitudeComparison,
};
pub use fourier::{dft_eval, sigma_hat};
pub use point::LatticePoint;
pub use signal::LatticeSignal;
pub use stencil::{apply_adjoint, apply_stencil, Stencil};

use thiserror::Error;

use crate::scalar::ScalarParseError;

/// Coordinates are kept well inside `i64` so translations never overflow.
pub const MAX_COORD: i64 = 1 << 40;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("duplicate lattice point {0}")]
    DuplicatePoint(LatticePoint),
    #[error("stencil has no taps")]
    EmptyStencil,
    #[error("stencil tap at {0} has a zero coefficient")]
    ZeroTap(LatticePoint),
    #[error("operation requires a nonzero signal")]
    ZeroSignal,
    #[error("coordinate {0} outside the supported range ±2^40")]
    CoordinateRange(i64),
    #[error("non-finite coefficient")]
    NonFinite,
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), LatticeError> {
    if expected == found {
        Ok(())
    } else {
        Err(LatticeError::DimensionMismatch { expected, found })
    }
}
