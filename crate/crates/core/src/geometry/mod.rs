//! Ball-swept polytopes and the support geometry of the background
//! (holography) problem.

mod body;
mod checks;
mod minnorm;

pub use body::{distance, ConvexBody};
pub use checks::{
    check_problem3_geometry, check_remark5, check_thm4_separation, has_lattice_point,
    remaining_offsets, Problem3Report, Remark5Outcome, Thm4Separation,
};

use thiserror::Error;

/// Bodies live in at most this many dimensions.
pub const MAX_BODY_DIM: usize = 6;
/// Upper bound on stored vertices per body.
pub const MAX_VERTICES: usize = 4096;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("bodies are limited to dimension {MAX_BODY_DIM} (got {0})")]
    DimensionTooHigh(usize),
    #[error("a body needs at least one vertex")]
    NoVertices,
    #[error("too many vertices ({0})")]
    TooManyVertices(usize),
    #[error("non-finite coordinate or radius")]
    NonFinite,
    #[error("radius must be nonnegative")]
    NegativeRadius,
    #[error("offset list is empty")]
    NoOffsets,
    #[error("hull of a union needs equal sweep radii")]
    UnequalRadii,
    #[error("reference offset y* is not a stencil offset")]
    OffsetNotInStencil,
    #[error("reference offset y* is not in -T (its reflection is not a stencil offset)")]
    ReflectionNotInStencil,
    #[error("no remaining offsets: (T ∪ -T) \\ {{y*}} is empty, so D would be empty")]
    NoRemainingOffsets,
    #[error("D0 and D are not separated (distance {0})")]
    SeparationFails(f64),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected == found {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch { expected, found })
    }
}
