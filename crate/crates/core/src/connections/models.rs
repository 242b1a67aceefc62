use std::collections::HashMap;

use super::eta::ChainToFormMap;
use super::filtered::{CohomologyBasis, E1Page, FilteredComplex};
use super::{CheckResult, CochainSpaces, Cocycle, ConnectionError, VerificationReport};
use crate::chevalley::{homology_dims, Direction, GradedComplex};
use crate::liealg::ColorMap;
use crate::logforms::{
    aomoto_complex, alt_colored, dedup_forms, log_monomials, omega_coulomb, Ambient, FiberComplex, FormSpace,
    LogForm, LogFormError, LogGenerator, saturated_evaluations,
};
use crate::scalars::{ExactMatrix, KappaScalar, Rational, SeededSampler};

fn inv_kappa() -> KappaScalar {
    KappaScalar::kappa().inv().unwrap()
}

/// Σ_π-skew log forms on U_{n,N} with differential (1/κ)ω∧, filtered by
/// the number of dz's in the expanded terms.
#[derive(Clone, Debug)]
pub struct TargetModel {
    pub n: usize,
    pub big_n: usize,
    pub spaces: Vec<FormSpace>,
    pub filtered: FilteredComplex,
}

/// F^p of a form space: coordinate vectors whose forms have no expanded
/// term with fewer than p dz's. Certified at two fresh points.
fn filtration_step(space: &FormSpace, p: u32, s: &mut SeededSampler) -> Result<Vec<Vec<KappaScalar>>, ConnectionError> {
    let amb = &space.ambient;
    let basis = space.basis();
    let trials = amb.trials_for(basis.len(), basis.first().and_then(|w| w.degree()).unwrap_or(0));
    let (_, _, m) = saturated_evaluations(amb, s, trials, basis.len(), |pt| {
        basis.iter().map(|w| amb.eval(w, pt).below_level(p)).collect()
    })?;
    let kernel = m.kernel_basis();
    for (idx, v) in kernel.iter().enumerate() {
        let w = crate::logforms::combine(&basis, v);
        for _ in 0..2 {
            let pt = amb.sample(s)?;
            if !amb.eval(&w, &pt).below_level(p).is_zero() {
                return Err(LogFormError::UnluckySample { what: format!("F^{p} vector {idx}"), seed: s.seed() }.into());
            }
        }
    }
    Ok(kernel)
}

/// Builds the complex of form spaces with differential (1/κ)ω∧.
fn form_complex(spaces: &mut [FormSpace], omega: &LogForm) -> Result<GradedComplex, ConnectionError> {
    let mut maps = Vec::new();
    for d in 0..spaces.len().saturating_sub(1) {
        let (lo, hi) = spaces.split_at_mut(d + 1);
        let cols = (0..lo[d].dim())
            .map(|j| hi[0].coords(&omega.wedge(lo[d].basis_form(j))))
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(ExactMatrix::from_columns(&cols, hi[0].dim()));
    }
    let dims = spaces.iter().map(|sp| sp.dim()).collect();
    let labels = spaces.iter().map(|sp| sp.basis().iter().map(|w| w.to_string()).collect()).collect();
    let c = GradedComplex::new(Direction::Cohomological, dims, maps, labels);
    c.check_square_zero().map_err(|d| ConnectionError::Shape(format!("(1/k)omega^ does not square to zero at degree {d}")))?;
    Ok(c)
}

pub fn target_model(
    rd: &crate::liealg::RootData,
    pi: &ColorMap,
    s: &mut SeededSampler,
) -> Result<TargetModel, ConnectionError> {
    let n = rd.n();
    let big_n = pi.len();
    let top = n + big_n - 1;
    let amb = Ambient::full(n, big_n);
    let mut spaces = Vec::new();
    for d in 0..=top {
        let fam = dedup_forms(log_monomials(n, big_n, d).iter().map(|m| alt_colored(m, pi)).collect());
        let trials = amb.trials_for(fam.len(), d);
        spaces.push(FormSpace::new(fam, amb.clone(), &mut s.child(d as u64), trials)?);
    }
    let omega = omega_coulomb(rd, pi).scale(&inv_kappa());
    let complex = form_complex(&mut spaces, &omega)?;
    let mut filtration = Vec::new();
    for (d, sp) in spaces.iter().enumerate() {
        let mut steps = Vec::new();
        for p in 1..=d.min(n) {
            steps.push(filtration_step(sp, p as u32, &mut s.child(1000 + (d * 16 + p) as u64))?);
        }
        filtration.push(steps);
    }
    let filtered = FilteredComplex::from_subspaces(complex, filtration)?;
    Ok(TargetModel { n, big_n, spaces, filtered })
}

/// OS(U_n) ⊗ C_•(n, M^c)_λ, totalized so that φ ⊗ x with φ of degree p and
/// x of chain degree l sits in degree p + N − l, with
/// D = d_h + (−1)^p d_v, d_h = (1/κ)Σ dln(z_i − z_j)∧ ⊗ Ω^c_ij, d_v = d.
#[derive(Clone, Debug)]
pub struct SourceModel {
    pub os: Vec<FormSpace>,
    /// basis[T] lists (p, os index, l, chain index).
    pub basis: Vec<Vec<(usize, usize, usize, usize)>>,
    pub d_h: Vec<ExactMatrix>,
    pub d_v: Vec<ExactMatrix>,
    pub filtered: FilteredComplex,
    pub axioms: VerificationReport,
}

pub fn source_model(spaces: &CochainSpaces, big_n: usize, s: &mut SeededSampler) -> Result<SourceModel, ConnectionError> {
    let n = spaces.n();
    let top = n + big_n - 1;
    let amb = Ambient::full(n, 0);
    let mut os = Vec::new();
    for p in 0..n {
        let fam = log_monomials(n, 0, p);
        let trials = amb.trials_for(fam.len(), p);
        os.push(FormSpace::new(fam, amb.clone(), &mut s.child(p as u64), trials)?);
    }
    let chain_top = spaces.chains.chains.len();
    let mut basis: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); top + 1];
    for (p, space) in os.iter().enumerate() {
        for l in 0..chain_top.min(big_n + 1) {
            let t = p + big_n - l;
            for j in 0..space.dim() {
                for i in 0..spaces.dim(l) {
                    basis[t].push((p, j, l, i));
                }
            }
        }
    }
    let index: Vec<HashMap<(usize, usize, usize, usize), usize>> =
        basis.iter().map(|b| b.iter().enumerate().map(|(k, &e)| (e, k)).collect()).collect();

    // dln(z_a − z_b) ∧ φ_j in OS^{p+1} coordinates
    let mut wedge_coords: HashMap<(usize, usize, (usize, usize)), Vec<KappaScalar>> = HashMap::new();
    for p in 0..n.saturating_sub(1) {
        for j in 0..os[p].dim() {
            for &(a, b) in spaces.omega[0].keys() {
                let w = LogForm::generator(LogGenerator::zz(a, b)).wedge(os[p].basis_form(j));
                let c = os[p + 1].coords(&w)?;
                wedge_coords.insert((p, j, (a, b)), c);
            }
        }
    }

    let mut d_h = Vec::new();
    let mut d_v = Vec::new();
    let mut total = Vec::new();
    for t in 0..top {
        let mut h = ExactMatrix::zeros(basis[t + 1].len(), basis[t].len());
        let mut v = ExactMatrix::zeros(basis[t + 1].len(), basis[t].len());
        for (col, &(p, j, l, i)) in basis[t].iter().enumerate() {
            if p + 1 < n {
                for (&pair, om) in &spaces.omega[l] {
                    let wc = &wedge_coords[&(p, j, pair)];
                    for (j2, c) in wc.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for r in 0..spaces.dim(l) {
                            let x = om.get(i, r);
                            if !x.is_zero() {
                                let row = index[t + 1][&(p + 1, j2, l, r)];
                                h.add_to(row, col, &(&(c * x) * &inv_kappa()));
                            }
                        }
                    }
                }
            }
            if l > 0 {
                let dm = &spaces.chains.complex.maps[l - 1];
                for r in 0..spaces.dim(l - 1) {
                    let x = dm.get(r, i);
                    if !x.is_zero() {
                        let row = index[t + 1][&(p, j, l - 1, r)];
                        v.add_to(row, col, x);
                    }
                }
            }
        }
        // (−1)^p on the vertical part
        let mut signed = v.clone();
        for (col, &(p, ..)) in basis[t].iter().enumerate() {
            if p % 2 == 1 {
                for r in 0..signed.rows() {
                    let x = -signed.get(r, col);
                    signed.set(r, col, x);
                }
            }
        }
        total.push(h.add(&signed));
        d_h.push(h);
        d_v.push(v);
    }
    let mut axioms = VerificationReport::default();
    let mut hh = Vec::new();
    let mut vv = Vec::new();
    let mut hv = Vec::new();
    for t in 1..top {
        if !d_h[t].mul(&d_h[t - 1]).is_zero() {
            hh.push(format!("degree {t}"));
        }
        if !d_v[t].mul(&d_v[t - 1]).is_zero() {
            vv.push(format!("degree {t}"));
        }
        if d_h[t].mul(&d_v[t - 1]) != d_v[t].mul(&d_h[t - 1]) {
            hv.push(format!("degree {t}"));
        }
    }
    axioms.push(CheckResult::from_failures("dh_squared", hh));
    axioms.push(CheckResult::from_failures("dv_squared", vv));
    axioms.push(CheckResult::from_failures("dh_dv_commute", hv));
    let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
    let complex = GradedComplex::new(Direction::Cohomological, dims, total, Vec::new());
    axioms.push(CheckResult::from_failures(
        "total_squared",
        complex.check_square_zero().err().map(|d| vec![format!("degree {d}")]).unwrap_or_default(),
    ));
    let levels = basis.iter().map(|b| b.iter().map(|e| e.0).collect()).collect();
    let filtered = FilteredComplex::from_levels(complex, levels)?;
    Ok(SourceModel { os, basis, d_h, d_v, filtered, axioms })
}

#[derive(Clone, Debug)]
pub struct E1Comparison {
    pub source: E1Page,
    pub target: E1Page,
    /// D_tgt ∘ H = H ∘ D_src and H(F^p) ⊆ F^p for the matrix H of η̃.
    pub chain_map: VerificationReport,
    /// ranks[p][T] of the induced map H^T(Gr^p) → H^T(Gr^p).
    pub induced_ranks: Vec<Vec<usize>>,
    pub iso: bool,
}

/// Compares E1 pages through the matrix of φ ⊗ x ↦ φ∧η̃(x).
pub fn e1_comparison(
    src: &mut SourceModel,
    tgt: &mut TargetModel,
    eta_tilde: &ChainToFormMap,
) -> Result<E1Comparison, ConnectionError> {
    let degrees = tgt.spaces.len();
    let mut h = Vec::new();
    for t in 0..degrees {
        let mut cols = Vec::new();
        for &(p, j, l, i) in &src.basis[t] {
            let w = src.os[p].basis_form(j).wedge(eta_tilde.image(l, i));
            cols.push(tgt.spaces[t].coords(&w)?);
        }
        h.push(ExactMatrix::from_columns(&cols, tgt.spaces[t].dim()));
    }
    let mut commute = Vec::new();
    let mut filt = Vec::new();
    for t in 0..degrees {
        if t + 1 < degrees {
            let lhs = tgt.filtered_input_map(t).mul(&h[t]);
            let rhs = h[t + 1].mul(&src.filtered.input_map(t));
            if lhs != rhs {
                commute.push(format!("degree {t}"));
            }
        }
        if !FilteredComplex::is_filtered_map(&src.filtered, &tgt.filtered, &h[t], t) {
            filt.push(format!("degree {t}"));
        }
    }
    let mut chain_map = VerificationReport::default();
    chain_map.push(CheckResult::from_failures("commutes", commute));
    chain_map.push(CheckResult::from_failures("filtered", filt));

    let source = src.filtered.e1_page();
    let target = tgt.filtered.e1_page();
    let levels = tgt.filtered.max_level().max(src.filtered.max_level());
    let mut induced_ranks = Vec::new();
    let mut iso = chain_map.passed();
    for p in 0..=levels {
        let mut row = Vec::new();
        for t in 0..degrees {
            let ds = source.graded_dims.get(p).map_or(0, |v| v[t]);
            let dt = target.graded_dims.get(p).map_or(0, |v| v[t]);
            let r = if ds == 0 || dt == 0 {
                0
            } else {
                FilteredComplex::induced_map(&src.filtered, &tgt.filtered, &h[t], p, t).rank()
            };
            iso &= r == ds && r == dt;
            row.push(r);
        }
        induced_ranks.push(row);
    }
    Ok(E1Comparison { source, target, chain_map, induced_ranks, iso })
}

impl TargetModel {
    fn filtered_input_map(&self, t: usize) -> ExactMatrix {
        self.filtered.input_map(t)
    }
}

/// η_z between the chain complex and the w-model A^•(z), over Q(κ) and at
/// an optional κ₀.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub chain_dims: Vec<usize>,
    /// dims of A^{N−l}(z), indexed by chain degree l.
    pub form_dims: Vec<usize>,
    pub eta_ranks: Vec<usize>,
    pub chain_homology: Vec<usize>,
    pub form_cohomology: Vec<usize>,
    pub induced_ranks: Vec<usize>,
    pub chain_map: bool,
    pub bijective: Vec<bool>,
    pub quasi_iso: bool,
    pub specialized: Option<Box<QuasiIsoReport>>,
    /// Set when the κ₀ data differ from the generic data.
    pub resonant: Option<bool>,
}

struct QuasiData {
    chain: GradedComplex,
    forms: GradedComplex,
    /// eta[l]: C_l → A^{N−l}(z)
    eta: Vec<ExactMatrix>,
}

impl QuasiData {
    fn specialize(&self, k0: &Rational) -> Option<Self> {
        Some(QuasiData {
            chain: self.chain.specialize(k0)?,
            forms: self.forms.specialize(k0)?,
            eta: self.eta.iter().map(|m| m.specialize(k0)).collect::<Option<_>>()?,
        })
    }

    fn report(&self) -> QuasiIsoReport {
        let l_count = self.eta.len();
        let chain_dims: Vec<usize> = (0..l_count).map(|l| self.chain.dims[l]).collect();
        let form_dims: Vec<usize> = (0..l_count).map(|l| self.forms.dims[l_count - 1 - l]).collect();
        let eta_ranks: Vec<usize> = self.eta.iter().map(|m| m.rank()).collect();
        let chain_h = homology_dims(&self.chain);
        let form_h = homology_dims(&self.forms);
        let chain_homology: Vec<usize> = (0..l_count).map(|l| chain_h[l]).collect();
        let form_cohomology: Vec<usize> = (0..l_count).map(|l| form_h[l_count - 1 - l]).collect();
        // η_{l−1} ∘ d = d_A ∘ η_l
        let chain_map = (1..l_count).all(|l| {
            let d = &self.chain.maps[l - 1];
            let da = &self.forms.maps[l_count - 1 - l];
            self.eta[l - 1].mul(d) == da.mul(&self.eta[l])
        });
        let mut induced_ranks = Vec::new();
        for l in 0..l_count {
            let cycles: Vec<Vec<KappaScalar>> = match self.chain.outgoing(l) {
                Some(m) => m.kernel_basis(),
                None => (0..chain_dims[l])
                    .map(|i| {
                        let mut v = vec![KappaScalar::zero(); chain_dims[l]];
                        v[i] = KappaScalar::one();
                        v
                    })
                    .collect(),
            };
            let hb = CohomologyBasis::new(&self.forms, l_count - 1 - l);
            let cols: Vec<Vec<KappaScalar>> = cycles
                .iter()
                .map(|z| hb.class_of(&self.eta[l].mul_vec(z)).unwrap_or_else(|| vec![KappaScalar::zero(); hb.rank()]))
                .collect();
            induced_ranks.push(if cols.is_empty() { 0 } else { ExactMatrix::from_columns(&cols, hb.rank()).rank() });
        }
        let bijective: Vec<bool> =
            (0..l_count).map(|l| chain_dims[l] == form_dims[l] && eta_ranks[l] == chain_dims[l]).collect();
        let quasi_iso = chain_map
            && (0..l_count).all(|l| induced_ranks[l] == chain_homology[l] && induced_ranks[l] == form_cohomology[l]);
        QuasiIsoReport {
            chain_dims,
            form_dims,
            eta_ranks,
            chain_homology,
            form_cohomology,
            induced_ranks,
            chain_map,
            bijective,
            quasi_iso,
            specialized: None,
            resonant: None,
        }
    }
}

pub fn generic_quasi_iso(
    c: &Cocycle,
    eta: &ChainToFormMap,
    z: &[Rational],
    kappa0: Option<&Rational>,
    s: &mut SeededSampler,
) -> Result<QuasiIsoReport, ConnectionError> {
    let mut fiber: FiberComplex = aomoto_complex(&c.rd, c.big_n, z, s)?;
    let chain = c.spaces.chains.complex.clone();
    // A^{N−l}: l = 0 is spaces[1], l = 1 is spaces[0]
    let mut eta_m = Vec::new();
    for l in 0..2 {
        let space = &mut fiber.spaces[1 - l];
        let cols = (0..c.spaces.dim(l)).map(|i| space.coords(eta.image(l, i))).collect::<Result<Vec<_>, _>>()?;
        eta_m.push(ExactMatrix::from_columns(&cols, space.dim()));
    }
    let data = QuasiData { chain, forms: fiber.complex.clone(), eta: eta_m };
    let mut report = data.report();
    if let Some(k0) = kappa0 {
        match data.specialize(k0) {
            Some(sd) => {
                let sr = sd.report();
                let resonant = sr.form_cohomology != report.form_cohomology
                    || sr.chain_homology != report.chain_homology
                    || sr.induced_ranks != report.induced_ranks
                    || sr.eta_ranks != report.eta_ranks;
                report.resonant = Some(resonant);
                report.specialized = Some(Box::new(sr));
            }
            None => report.resonant = Some(true),
        }
    }
    Ok(report)
}
