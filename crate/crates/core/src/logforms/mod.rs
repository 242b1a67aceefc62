//! Logarithmic forms on the discriminantal arrangement U_{n,N}.

mod aomoto;
mod exterior;
mod forms;
mod generator;
mod span;

use thiserror::Error;

use crate::scalars::ScalarError;

pub use aomoto::{aomoto_complex, dedup_forms, fiber_monomials, log_monomials, skew_fiber_complex, FiberComplex};
pub use exterior::{evaluate, evaluate_fiber, generator_covector, EvaluatedForm};
pub use forms::{
    alt, alt_colored, build_u_a, build_u_b, build_w_a, build_w_b, color_preserving, is_skew, multi_indices,
    omega_coulomb, omega_split, permutation_sign, permutations,
};
pub use generator::{LogForm, LogGenerator, LogMonomial};
pub use span::{combine, evaluation_matrix, relations, saturated_evaluations, span_dim, Ambient, EvalMode, FormSpace};

#[derive(Debug, Error)]
pub enum LogFormError {
    #[error("unlucky sample while certifying {what} (seed {seed}); rerun with a different --seed")]
    UnluckySample { what: String, seed: u64 },
    #[error("form is not in the span: {0}")]
    NotInSpan(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Sampler(#[from] ScalarError),
}
