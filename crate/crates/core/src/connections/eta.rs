use super::{CheckResult, CochainSpaces, Cocycle, ConnectionError, VerificationReport};
use crate::liealg::ColorMap;
use crate::logforms::{evaluate, is_skew, LogForm, LogGenerator};
use crate::scalars::{KappaScalar, SamplePoint, SeededSampler};

/// Assigns a log form of degree N − l to each chain basis vector of
/// degree l (the dual basis of the cochain coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainToFormMap {
    pub big_n: usize,
    pub assignment: Vec<Vec<LogForm>>,
}

impl ChainToFormMap {
    pub fn image(&self, l: usize, i: usize) -> &LogForm {
        &self.assignment[l][i]
    }

    /// Image of a chain vector with coordinates `x` in degree l.
    pub fn apply(&self, l: usize, x: &[KappaScalar]) -> LogForm {
        let mut out = LogForm::zero();
        for (w, c) in self.assignment[l].iter().zip(x) {
            if !c.is_zero() {
                out = out.add(&w.scale(c));
            }
        }
        out
    }

    /// Termwise fiber projection (drops dz-components).
    pub fn project(&self) -> Self {
        self.map_forms(|w| w.project_fiber())
    }

    pub fn map_forms(&self, f: impl Fn(&LogForm) -> LogForm) -> Self {
        ChainToFormMap {
            big_n: self.big_n,
            assignment: self.assignment.iter().map(|v| v.iter().map(&f).collect()).collect(),
        }
    }
}

/// η: the pairing of dual chain basis vectors with the fiber restrictions
/// of the components of I_0 and I_1.
pub fn eta_from_cocycle(c: &Cocycle) -> ChainToFormMap {
    ChainToFormMap {
        big_n: c.big_n,
        assignment: vec![
            c.i0.comps.iter().map(|w| w.project_fiber()).collect(),
            c.i1.comps.iter().map(|w| w.project_fiber()).collect(),
        ],
    }
}

/// η̃: every fraction dt_a/(t_a − z_i) replaced by dln(t_a − z_i).
pub fn eta_tilde_lift(eta: &ChainToFormMap) -> ChainToFormMap {
    eta.map_forms(|w| w.lift_fiber())
}

/// All wedge monomials of degree p in the dln(z_i − z_j).
pub(crate) fn z_monomials(n: usize, p: usize) -> Vec<LogForm> {
    let gens: Vec<LogGenerator> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| LogGenerator::ZZ(i, j))).collect();
    let mut out = Vec::new();
    fn rec(gens: &[LogGenerator], p: usize, start: usize, cur: &mut Vec<LogGenerator>, out: &mut Vec<LogForm>) {
        if cur.len() == p {
            out.push(LogForm::monomial(cur.clone(), KappaScalar::one()));
            return;
        }
        for i in start..gens.len() {
            cur.push(gens[i]);
            rec(gens, p, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(&gens, p, 0, &mut Vec::new(), &mut out);
    out
}

/// Residual η̃(D_src x) − (1/κ)ω∧η̃(x) for a chain basis vector x of degree
/// l, where D_src x = (1/κ)Σ dln(z_i − z_j) ⊗ Ω^c_ij x + d x.
pub(crate) fn chain_map_residual(
    eta: &ChainToFormMap,
    spaces: &CochainSpaces,
    omega: &LogForm,
    l: usize,
    i: usize,
) -> LogForm {
    let inv_k = KappaScalar::kappa().inv().unwrap();
    let mut lhs = LogForm::zero();
    // Ω^c = Ωᵀ on chains: Ω^c x_i = Σ_r Ω[i][r] x_r
    for (&(a, b), m) in &spaces.omega[l] {
        let image = eta.apply(l, m.row(i));
        lhs = lhs.add(&LogForm::generator(LogGenerator::zz(a, b)).wedge(&image).scale(&inv_k));
    }
    if l > 0 {
        let d = &spaces.chains.complex.maps[l - 1];
        lhs = lhs.add(&eta.apply(l - 1, &d.column(i)));
    }
    lhs.sub(&omega.wedge(eta.image(l, i)).scale(&inv_k))
}

/// Checks that η̃ intertwines the source differential with (1/κ)ω∧, that
/// z-form multiples φ ⊗ x of filtration level p land in dz-count ≥ p, that
/// degrees match, and that all images are Σ_N-skew.
pub fn verify_chain_map(
    eta: &ChainToFormMap,
    spaces: &CochainSpaces,
    omega: &LogForm,
    s: &mut SeededSampler,
    count: usize,
) -> Result<VerificationReport, ConnectionError> {
    let n = spaces.n();
    let big_n = eta.big_n;
    let pts: Vec<SamplePoint> = (0..count).map(|_| s.sample_point(n, big_n)).collect::<Result<_, _>>()?;
    let mut report = VerificationReport::default();

    let mut comm = Vec::new();
    for l in 0..eta.assignment.len() {
        for i in 0..eta.assignment[l].len() {
            let r = chain_map_residual(eta, spaces, omega, l, i);
            if let Some(p) = pts.iter().position(|p| !evaluate(&r, p).is_zero()) {
                comm.push(format!("{} at point {p}", spaces.label(l, i)));
            }
        }
    }
    report.push(CheckResult::from_failures("commutes", comm));

    let mut filt = Vec::new();
    let mut degs = Vec::new();
    let mut skew = Vec::new();
    let pi = ColorMap(vec![0; big_n]);
    for l in 0..eta.assignment.len() {
        for (i, w) in eta.assignment[l].iter().enumerate() {
            if !w.is_zero() && w.degree() != Some(big_n - l) {
                degs.push(spaces.label(l, i));
            }
            if !is_skew(w, &pi) {
                skew.push(spaces.label(l, i));
            }
            for p in 0..n {
                for phi in z_monomials(n, p) {
                    let img = phi.wedge(w);
                    for (pt_idx, pt) in pts.iter().enumerate().take(2) {
                        if evaluate(&img, pt).min_dz_count().is_some_and(|m| (m as usize) < p) {
                            filt.push(format!("{phi} (x) {} at point {pt_idx}", spaces.label(l, i)));
                        }
                    }
                }
            }
        }
    }
    report.push(CheckResult::from_failures("filtration", filt));
    report.push(CheckResult::from_failures("degrees", degs));
    report.push(CheckResult::from_failures("skew", skew));
    Ok(report)
}
