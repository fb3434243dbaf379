//! Orbits, contraction evidence and degree-growth classification.

mod contraction;
mod growth;
mod norm;
mod orbit;

pub use contraction::{
    check_coordinate_laws, contraction_evidence, contraction_recurrence_check, sample_outcome, sample_points,
    spectral_radius_at_origin,
    ContractionConfig, ContractionVerdict, RecurrenceReport, SampleOutcome, Verdict,
};
pub use growth::{
    classify_growth, classify_plane, strict_algebraicity_report, AlgebraicityReport, AlgebraicityStatus,
    GrowthClass, GrowthEvidence, GrowthVerdict, PlaneClass, PlaneVerdict, MIN_GROWTH_ENTRIES,
};
pub use norm::{sup_norm_exact, Norm};
pub use orbit::{orbit, Orbit, OrbitError, DIVERGENCE_CUTOFF};

use thiserror::Error;

use crate::iterate::DegreeSequenceError;
use crate::linalg::EigenError;
use crate::map::MapError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Sequence(#[from] DegreeSequenceError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("need at least {min} degree entries, got {len}")]
    InsufficientData { len: usize, min: usize },
    #[error("invalid parameter: {0}")]
    Parameter(alloc::string::String),
}
