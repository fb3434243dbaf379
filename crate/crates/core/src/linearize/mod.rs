//! Resonance detection and truncated linearization at an attracting fixed point.

mod jet;
mod poincare;
mod resonance;
mod symbol;

pub use jet::TruncatedMap;
pub use poincare::{
    poincare_dulac, to_eigencoordinates, verify_linearization, LinearizationResult, LinearizeConfig, VerifyConfig,
    VerifyReport,
};
pub use resonance::{
    check_resonance_numeric, check_resonance_symbolic, for_each_multi_index, monomial_value, ResonanceReport, Witness,
};
pub use symbol::{eigen_symbols_gamma_d, EigenSymbol};

use alloc::string::String;
use thiserror::Error;

use crate::linalg::EigenError;
use crate::map::MapError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearizeError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("no usable eigenbasis: {0}")]
    Eigen(#[from] EigenError),
    #[error("spectrum is resonant up to order {}: {} relation(s) found", .0.max_order, .0.witnesses.len())]
    Resonance(ResonanceReport),
    #[error("eigenvalue of modulus {modulus} lies outside the open unit disc")]
    OutsidePoincareDomain { modulus: f64 },
    #[error("conjugacy residual {residual:e} exceeds tolerance")]
    Convergence { residual: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
