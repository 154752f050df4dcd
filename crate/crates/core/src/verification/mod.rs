//! Claim execution, randomized campaigns with negative controls, and an
//! alternating-projection demo.

mod campaign;
mod report;
mod solver;

pub use campaign::{
    property_campaign, CampaignConfig, CampaignRow, CampaignSummary, ClassStats, InstanceClass,
};
pub use report::{default_grid, run_claims, run_claims_timed, ClaimResult, VerificationReport};
pub use solver::{
    orbit_distance, solver_demo, Landing, LandingStats, Magnitudes, SolverConfig, SolverConstraint,
    SolverRun, SolverTarget,
};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::lattice::LatticeError;
use crate::signal::SignalError;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("bundle has no signal named `{0}`")]
    UnknownSignal(String),
    #[error("bundle has no body named `{0}`")]
    UnknownBody(String),
    #[error("claim needs the bundle stencil, but none is stored")]
    MissingStencil,
    #[error("malformed bundle: {0}")]
    Malformed(String),
    #[error("magnitude grid {grid} is smaller than 4x the support width {width}")]
    GridTooSmall { grid: usize, width: usize },
    #[error("solver input: {0}")]
    SolverInput(String),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<LatticeError> for VerifyError {
    fn from(e: LatticeError) -> Self {
        VerifyError::Signal(e.into())
    }
}
