//! Floating-point side of the engine: the master function, quadrature of
//! one-dimensional hypergeometric integrals, KZ residuals, and the exact
//! two-point dual KZ check.

mod dualkz;
mod master;
mod quadrature;
mod solution;

pub use dualkz::{dual_kz_check, DualKzReport, Laurent};
pub use master::MasterFunction;
pub use quadrature::{regularized_power_integral, tanh_sinh, Quadrature};
pub use solution::{
    coker_solution_check, integrate_solution, kz_residual, kz_residual_signed, CokerReport, Contour, KzResidual,
    NumericSolution, Regularization, ZGrid,
};

use kzh_core::liealg::LieError;
use kzh_core::scalars::ScalarError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("endpoint z{endpoint} has exponent {exponent}, outside the integrable or regularizable range")]
    DivergentExponent { endpoint: usize, exponent: f64 },
    #[error("quadrature stalled at error {achieved:e} (requested {requested:e}) after {levels} levels")]
    NonConvergence { achieved: f64, requested: f64, levels: usize },
    #[error("grid point {0} leaves the chamber of the base point; the branch cannot be transported")]
    BranchCrossing(usize),
    #[error("{0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Sampler(#[from] ScalarError),
}

pub(crate) fn to_f64(r: &kzh_core::scalars::Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
