//! KZ and Coulomb differentials, the canonical cocycle, the maps η and η̃,
//! filtered complexes and their E1 pages.

mod cocycle;
mod eta;
mod filtered;
mod kz;
mod models;
mod report;

use thiserror::Error;

use crate::chevalley::ChevalleyError;
use crate::liealg::LieError;
use crate::logforms::LogFormError;
use crate::scalars::ScalarError;

pub use cocycle::{build_cocycle, perturb, verify_cocycle, CochainSpaces, Cocycle, MixedElement};
pub use eta::{eta_from_cocycle, eta_tilde_lift, verify_chain_map, ChainToFormMap};
pub use filtered::{CohomologyBasis, E1Page, FilteredComplex};
pub use kz::{check_coulomb_flatness, check_flatness, kz_form, ExplicitOmega, OmegaProvider, OperatorValuedForm, Sl2Casimir};
pub use models::{
    e1_comparison, generic_quasi_iso, source_model, target_model, E1Comparison, QuasiIsoReport, SourceModel,
    TargetModel,
};
pub use report::{CheckResult, VerificationReport};

#[derive(Debug, Error)]
pub enum ConnectionError {
    #[error("no Omega provider for r = {0}; supply explicit Omega matrices")]
    MissingOmega(usize),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Forms(#[from] LogFormError),
    #[error(transparent)]
    Sampler(#[from] ScalarError),
}
