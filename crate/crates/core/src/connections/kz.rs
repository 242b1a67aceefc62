use std::collections::BTreeMap;

use super::{CheckResult, ConnectionError};
use crate::liealg::{casimir_sl2, MultiDegree, RootData, WeightComponent};
use crate::scalars::{ExactMatrix, KappaScalar, Rational, SeededSampler};

/// Supplies Ω_ij on a weight component M_d of M(μ_1) ⊗ … ⊗ M(μ_n), in the
/// word basis of `WeightComponent`.
pub trait OmegaProvider {
    fn omega(&self, i: usize, j: usize, d: &MultiDegree) -> Result<ExactMatrix, ConnectionError>;
}

/// Built-in Casimir for sl2 data.
#[derive(Clone, Debug)]
pub struct Sl2Casimir {
    pub rd: RootData,
}

impl Sl2Casimir {
    pub fn new(rd: &RootData) -> Result<Self, ConnectionError> {
        if rd.r() != 1 {
            return Err(ConnectionError::MissingOmega(rd.r()));
        }
        Ok(Sl2Casimir { rd: rd.clone() })
    }
}

impl OmegaProvider for Sl2Casimir {
    fn omega(&self, i: usize, j: usize, d: &MultiDegree) -> Result<ExactMatrix, ConnectionError> {
        Ok(casimir_sl2(&self.rd, i.min(j), i.max(j), d)?)
    }
}

/// User-supplied Ω_ij matrices keyed by (module degree, i, j) with i < j.
#[derive(Clone, Debug, Default)]
pub struct ExplicitOmega {
    pub n: usize,
    pub matrices: BTreeMap<(Vec<usize>, usize, usize), ExactMatrix>,
}

impl OmegaProvider for ExplicitOmega {
    fn omega(&self, i: usize, j: usize, d: &MultiDegree) -> Result<ExactMatrix, ConnectionError> {
        let (a, b) = (i.min(j), i.max(j));
        let m = self
            .matrices
            .get(&(d.0.clone(), a, b))
            .ok_or_else(|| ConnectionError::Shape(format!("no Omega_{}{} supplied for degree {d}", a + 1, b + 1)))?;
        let dim = WeightComponent::new(self.n, d).dim();
        if m.rows() != dim || m.cols() != dim {
            return Err(ConnectionError::Shape(format!(
                "Omega_{}{} at degree {d} is {}x{}, weight component has dimension {dim}",
                a + 1,
                b + 1,
                m.rows(),
                m.cols()
            )));
        }
        Ok(m.clone())
    }
}

/// prefactor · Σ_{i<j} M_ij dln(z_i − z_j) with square matrices M_ij.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorValuedForm {
    pub n: usize,
    pub dim: usize,
    pub prefactor: KappaScalar,
    pub terms: BTreeMap<(usize, usize), ExactMatrix>,
}

impl OperatorValuedForm {
    pub fn scale(&self, c: &KappaScalar) -> Self {
        OperatorValuedForm { prefactor: &self.prefactor * c, ..self.clone() }
    }

    /// The dz_s coefficient A_s at the point z.
    pub fn coefficient(&self, z: &[Rational], s: usize) -> ExactMatrix {
        let mut a = ExactMatrix::zeros(self.dim, self.dim);
        for (&(i, j), m) in &self.terms {
            let inv = Rational::from_integer(1.into()) / (&z[i] - &z[j]);
            let c = if s == i {
                inv
            } else if s == j {
                -inv
            } else {
                continue;
            };
            a = a.add(&m.scale(&self.prefactor.scale_rational(&c)));
        }
        a
    }
}

/// ω_KZ = Σ_{i<j} Ω_ij dln(z_i − z_j) on M_k.
pub fn kz_form(rd: &RootData, k: &MultiDegree, provider: &dyn OmegaProvider) -> Result<OperatorValuedForm, ConnectionError> {
    let n = rd.n();
    let dim = WeightComponent::new(n, k).dim();
    let mut terms = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            terms.insert((i, j), provider.omega(i, j, k)?);
        }
    }
    Ok(OperatorValuedForm { n, dim, prefactor: KappaScalar::one(), terms })
}

/// A∧A = Σ_{s<u} [A_s, A_u] dz_s∧dz_u = 0 at seeded points for the
/// connection form A = −(1/κ)ω_KZ (each entry of A is closed, so this is
/// the full curvature).
pub fn check_flatness(form: &OperatorValuedForm, s: &mut SeededSampler, points: usize) -> Result<CheckResult, ConnectionError> {
    let a = form.scale(&-KappaScalar::kappa().inv().unwrap());
    let mut failures = Vec::new();
    for p in 0..points {
        let z = s.sample_point(form.n, 0)?.z;
        let coeffs: Vec<ExactMatrix> = (0..form.n).map(|i| a.coefficient(&z, i)).collect();
        for i in 0..form.n {
            for j in (i + 1)..form.n {
                let comm = coeffs[i].mul(&coeffs[j]).sub(&coeffs[j].mul(&coeffs[i]));
                if !comm.is_zero() {
                    failures.push(format!("[A_{}, A_{}] != 0 at point {p}", i + 1, j + 1));
                }
            }
        }
    }
    Ok(CheckResult::from_failures("flatness", failures))
}

/// Curvature of ∇_{KZ,Coul} = d + (1/κ)ω_m − (1/κ)ω_KZ on U_{n,N}: with A_c
/// the coefficient of the c-th covector (dz's then dt's), checks
/// [A_c, A_e] = 0 for all c < e at seeded points.
pub fn check_coulomb_flatness(
    form: &OperatorValuedForm,
    omega: &crate::logforms::LogForm,
    big_n: usize,
    s: &mut SeededSampler,
    points: usize,
) -> Result<CheckResult, ConnectionError> {
    let inv_k = KappaScalar::kappa().inv().unwrap();
    let kz = form.scale(&-inv_k.clone());
    let n = form.n;
    let mut failures = Vec::new();
    for p in 0..points {
        let pt = s.sample_point(n, big_n)?;
        let w = crate::logforms::evaluate(&omega.scale(&inv_k), &pt);
        let coeffs: Vec<ExactMatrix> = (0..n + big_n)
            .map(|c| {
                let scalar = w.terms.get(&(1u64 << c)).cloned().unwrap_or_else(KappaScalar::zero);
                let base = ExactMatrix::identity(form.dim).scale(&scalar);
                if c < n {
                    base.add(&kz.coefficient(&pt.z, c))
                } else {
                    base
                }
            })
            .collect();
        for c in 0..coeffs.len() {
            for e in (c + 1)..coeffs.len() {
                let comm = coeffs[c].mul(&coeffs[e]).sub(&coeffs[e].mul(&coeffs[c]));
                if !comm.is_zero() {
                    failures.push(format!("[A_{c}, A_{e}] != 0 at point {p}"));
                }
            }
        }
    }
    Ok(CheckResult::from_failures("coulomb_flatness", failures))
}
