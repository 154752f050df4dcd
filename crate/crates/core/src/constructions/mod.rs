//! Builders for the non-uniqueness constructions. Each builder checks its
//! premises, produces the signals (and, for background problems, the domains)
//! and emits a list of machine-checkable claims.

mod background;
mod claims;
mod conditions;
mod pairs;
mod support;

pub use background::{
    example2, theorem3_background, theorem4_background, Downgrade, Example2Params, NestedPsi,
};
pub use claims::{Bundle, Check, Claim, Kind, Term};
pub use conditions::Condition;
pub use pairs::{example1, theorem1_pair, theorem2_pauli_pair, Example1Params};
pub(crate) use pairs::unchecked_pair_bundle;
pub use support::{chi, two_bumps};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{ConvexBody, GeometryError};
use crate::scalar::Scalar;
use crate::signal::{Operator, Signal, SignalError};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("condition `{}` violated: {detail}", condition.name())]
    Precondition { condition: Condition, detail: String },
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    /// Two independent checks of the same fact disagree.
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
}

impl ConstructionError {
    pub fn condition(&self) -> Option<Condition> {
        match self {
            ConstructionError::Precondition { condition, .. } => Some(*condition),
            _ => None,
        }
    }
}

impl From<crate::lattice::LatticeError> for ConstructionError {
    fn from(e: crate::lattice::LatticeError) -> Self {
        ConstructionError::Signal(e.into())
    }
}

impl From<crate::continuous::ContinuousError> for ConstructionError {
    fn from(e: crate::continuous::ContinuousError) -> Self {
        ConstructionError::Signal(e.into())
    }
}

pub(crate) fn require(
    ok: bool,
    condition: Condition,
    detail: impl FnOnce() -> String,
) -> Result<(), ConstructionError> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::Precondition {
            condition,
            detail: detail(),
        })
    }
}

/// `f = Lψ`, `g = L*ψ` together with their sources.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionPair {
    pub provenance: Kind,
    pub stencil: Operator,
    pub psi: Signal,
    pub f: Signal,
    pub g: Signal,
}

/// A solution triple of the background problem and its domains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackgroundTriple {
    pub w0: Signal,
    pub w1: Signal,
    pub w2: Signal,
    pub d0: ConvexBody,
    pub d: ConvexBody,
    /// `e^{iφ}` for the reference-offset construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<Scalar>,
}

impl BackgroundTriple {
    /// Exact (or tolerance-level) equality of the signals and domains.
    pub fn same_as(&self, other: &BackgroundTriple) -> bool {
        self.w0.same_as(&other.w0)
            && self.w1.same_as(&other.w1)
            && self.w2.same_as(&other.w2)
            && same_body(&self.d0, &other.d0)
            && same_body(&self.d, &other.d)
    }
}

fn same_body(a: &ConvexBody, b: &ConvexBody) -> bool {
    let tol = crate::tolerance::GEOMETRY;
    a.dim() == b.dim()
        && (a.radius() - b.radius()).abs() <= tol
        && a.vertices().len() == b.vertices().len()
        && a.vertices()
            .iter()
            .zip(b.vertices())
            .all(|(u, v)| u.iter().zip(v).all(|(x, y)| (x - y).abs() <= tol))
}

/// Output of a builder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Construction {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<ConstructionPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<BackgroundTriple>,
    pub bundle: Bundle,
}
