use std::collections::{BTreeMap, HashMap};

use super::{CheckResult, ConnectionError, OmegaProvider, Sl2Casimir, VerificationReport};
use crate::chevalley::{build_chain_complex, ChevalleyComplex};
use crate::liealg::{MultiDegree, RootData, WeightComponent};
use crate::logforms::{
    build_u_b, build_w_a, build_w_b, evaluate, omega_coulomb, permutations, LogForm, LogGenerator,
};
use crate::liealg::ColorMap;
use crate::scalars::{int, ExactMatrix, KappaScalar, Rational, SamplePoint, SeededSampler};

/// Ω^p(U_{n,N}) ⊗ C^l: one log form per cochain basis vector of degree l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedElement {
    pub degree: usize,
    pub comps: Vec<LogForm>,
}

impl MixedElement {
    pub fn zero(degree: usize, len: usize) -> Self {
        MixedElement { degree, comps: vec![LogForm::zero(); len] }
    }

    pub fn is_formally_zero(&self) -> bool {
        self.comps.iter().all(|w| w.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree);
        MixedElement { degree: self.degree, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-KappaScalar::one()))
    }

    pub fn scale(&self, c: &KappaScalar) -> Self {
        MixedElement { degree: self.degree, comps: self.comps.iter().map(|w| w.scale(c)).collect() }
    }

    /// ω ∧ x, componentwise.
    pub fn wedge_left(&self, w: &LogForm) -> Self {
        MixedElement { degree: self.degree, comps: self.comps.iter().map(|x| w.wedge(x)).collect() }
    }

    /// Applies a matrix C^l → C^{l'} to the cochain factor.
    pub fn apply(&self, m: &ExactMatrix, degree: usize) -> Self {
        let mut out = MixedElement::zero(degree, m.rows());
        for r in 0..m.rows() {
            for (c, w) in self.comps.iter().enumerate() {
                let x = m.get(r, c);
                if !x.is_zero() && !w.is_zero() {
                    out.comps[r] = out.comps[r].add(&w.scale(x));
                }
            }
        }
        out
    }
}

/// Cochain spaces C^l(n, M)_λ dual to the Chevalley chains, with the
/// cochain differential and the Ω_ij acting on the module factor.
#[derive(Clone, Debug)]
pub struct CochainSpaces {
    pub chains: ChevalleyComplex,
    /// d[l]: C^l → C^{l+1}, the transpose of the chain differential.
    pub d: Vec<ExactMatrix>,
    /// omega[l][(i,j)] on C^l.
    pub omega: Vec<BTreeMap<(usize, usize), ExactMatrix>>,
}

impl CochainSpaces {
    pub fn new(rd: &RootData, k: &MultiDegree, provider: &dyn OmegaProvider) -> Result<Self, ConnectionError> {
        let chains = build_chain_complex(rd, k)?;
        let n = rd.n();
        let d = chains.complex.maps.iter().map(|m| m.transpose()).collect();
        let mut cache: HashMap<(MultiDegree, usize, usize), ExactMatrix> = HashMap::new();
        let mut omega = Vec::new();
        for basis in &chains.chains {
            let index: HashMap<_, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            let mut per_pair = BTreeMap::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut m = ExactMatrix::zeros(basis.len(), basis.len());
                    for (col, e) in basis.iter().enumerate() {
                        let deg = chains.module_degree(e);
                        let wc = WeightComponent::new(n, &deg);
                        let key = (deg.clone(), i, j);
                        if !cache.contains_key(&key) {
                            cache.insert(key.clone(), provider.omega(i, j, &deg)?);
                        }
                        let om = &cache[&key];
                        let u = wc.index_of(&e.module).expect("chain module part lies in its component");
                        for (row, t) in wc.basis.iter().enumerate() {
                            let c = om.get(row, u);
                            if c.is_zero() {
                                continue;
                            }
                            let mut target = e.clone();
                            target.module = t.clone();
                            m.set(index[&target], col, c.clone());
                        }
                    }
                    per_pair.insert((i, j), m);
                }
            }
            omega.push(per_pair);
        }
        Ok(CochainSpaces { chains, d, omega })
    }

    pub fn n(&self) -> usize {
        self.chains.rd.n()
    }

    pub fn dim(&self, l: usize) -> usize {
        self.chains.chains.get(l).map_or(0, |c| c.len())
    }

    pub fn label(&self, l: usize, i: usize) -> String {
        self.chains.label(&self.chains.chains[l][i])
    }

    /// Σ_{i<j} dln(z_i − z_j) ∧ Ω_ij x.
    pub fn kz(&self, x: &MixedElement) -> MixedElement {
        let mut out = MixedElement::zero(x.degree, self.dim(x.degree));
        for (&(i, j), m) in &self.omega[x.degree] {
            out = out.add(&x.apply(m, x.degree).wedge_left(&LogForm::generator(LogGenerator::zz(i, j))));
        }
        out
    }

    /// Chevalley differential C^l → C^{l+1} (zero past the top degree).
    pub fn d_ch(&self, x: &MixedElement) -> MixedElement {
        match self.d.get(x.degree) {
            Some(m) => x.apply(m, x.degree + 1),
            None => MixedElement::zero(x.degree + 1, 0),
        }
    }

    /// ∇ = d_DR + (1/κ)ω_m − (1/κ)ω_KZ on constant-coefficient log forms,
    /// where d_DR vanishes.
    pub fn nabla(&self, omega: &LogForm, x: &MixedElement) -> MixedElement {
        x.wedge_left(omega).sub(&self.kz(x)).scale(&KappaScalar::kappa().inv().unwrap())
    }
}

/// I = I_0 + I_1 with I_0 = Σ_a w_a ⊗ f^a v and I_1 = Σ_b w_b ⊗ (f ⊗ f^b v).
#[derive(Clone, Debug)]
pub struct Cocycle {
    pub rd: RootData,
    pub big_n: usize,
    pub spaces: CochainSpaces,
    pub omega: LogForm,
    pub i0: MixedElement,
    pub i1: MixedElement,
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(int(1), |acc, i| acc * int(i as i64))
}

pub fn build_cocycle(rd: &RootData, big_n: usize) -> Result<Cocycle, ConnectionError> {
    if rd.r() != 1 {
        return Err(ConnectionError::Shape(format!("the cocycle is defined for r = 1, got r = {}", rd.r())));
    }
    if big_n == 0 {
        return Err(ConnectionError::Shape("N must be at least 1".into()));
    }
    let k = MultiDegree(vec![big_n]);
    let spaces = CochainSpaces::new(rd, &k, &Sl2Casimir::new(rd)?)?;
    let powers = |module: &[Vec<usize>]| -> Vec<usize> { module.iter().map(|w| w.len()).collect() };
    let i0 = MixedElement {
        degree: 0,
        comps: spaces.chains.chains[0].iter().map(|e| build_w_a(&powers(&e.module))).collect(),
    };
    let i1 = MixedElement {
        degree: 1,
        comps: spaces.chains.chains[1].iter().map(|e| build_w_b(&powers(&e.module))).collect(),
    };
    let omega = omega_coulomb(rd, &ColorMap::standard(&k));
    Ok(Cocycle { rd: rd.clone(), big_n, spaces, omega, i0, i1 })
}

/// Adds κ times the leading monomial of component `index`.
pub fn perturb(x: &MixedElement, index: usize) -> MixedElement {
    let mut out = x.clone();
    let w = &out.comps[index];
    let m = w.terms.keys().next().cloned().unwrap_or_default();
    out.comps[index].add_term(m, KappaScalar::kappa());
    out
}

fn points(s: &mut SeededSampler, n: usize, big_n: usize, count: usize) -> Result<Vec<SamplePoint>, ConnectionError> {
    (0..count).map(|_| Ok(s.sample_point(n, big_n)?)).collect()
}

/// Exact vanishing of every component at every point.
fn vanishing(name: &str, x: &MixedElement, sp: &CochainSpaces, pts: &[SamplePoint]) -> CheckResult {
    let mut failures = Vec::new();
    for (i, w) in x.comps.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        if let Some(p) = pts.iter().position(|p| !evaluate(w, p).is_zero()) {
            failures.push(format!("component {} at point {p}", sp.label(x.degree, i)));
        }
    }
    CheckResult::from_failures(name, failures)
}

/// The two halves of (1/κ)ω∧I_1: a product term goes to P_2 when its
/// ω-factor involves the t-variable left out of the corresponding term of
/// w_b, and to P_1 otherwise.
fn lemma_split(c: &Cocycle) -> (MixedElement, MixedElement) {
    let sp = &c.spaces;
    let inv_k = KappaScalar::kappa().inv().unwrap();
    let mut p1 = MixedElement::zero(1, sp.dim(1));
    let mut p2 = MixedElement::zero(1, sp.dim(1));
    let perms = permutations(c.big_n);
    for (idx, e) in sp.chains.chains[1].iter().enumerate() {
        let b: Vec<usize> = e.module.iter().map(|w| w.len()).collect();
        let norm: Rational = b.iter().map(|&x| factorial(x)).product();
        let u = build_u_b(&b).scale(&KappaScalar::from_rational(int(1) / norm));
        for (sigma, sign) in &perms {
            let term = u.permute_t(sigma).scale(&KappaScalar::from_int(*sign as i64));
            let free_t = sigma[0];
            for (m, coeff) in &c.omega.terms {
                let g = m.0[0];
                let piece = LogForm::generator(g).wedge(&term).scale(&(coeff * &inv_k));
                let target = if g.involves_t(free_t) { &mut p2 } else { &mut p1 };
                target.comps[idx] = target.comps[idx].add(&piece);
            }
        }
    }
    (p1, p2)
}

/// Checks the cocycle identities exactly at `count` seeded points:
/// ∇I_0 = 0, ∇I_1 = d_Ch I_0, and the split P_1 = (1/κ)ω_KZ I_1,
/// P_2 = d_Ch I_0.
pub fn verify_cocycle(c: &Cocycle, s: &mut SeededSampler, count: usize) -> Result<VerificationReport, ConnectionError> {
    let sp = &c.spaces;
    let pts = points(s, sp.n(), c.big_n, count)?;
    let inv_k = KappaScalar::kappa().inv().unwrap();
    let mut report = VerificationReport::default();

    let r0 = sp.nabla(&c.omega, &c.i0);
    report.push(vanishing("nabla_i0", &r0, sp, &pts));

    let d_i0 = sp.d_ch(&c.i0);
    let r1 = sp.nabla(&c.omega, &c.i1).sub(&d_i0);
    report.push(vanishing("nabla_i1_minus_dch_i0", &r1, sp, &pts));

    if let Some(m) = sp.d.get(1) {
        let r2 = c.i1.apply(m, 2);
        report.push(vanishing("dch_i1", &r2, sp, &pts));
    }

    let (p1, p2) = lemma_split(c);
    report.push(vanishing("lemma_p1", &p1.sub(&sp.kz(&c.i1).scale(&inv_k)), sp, &pts));
    report.push(vanishing("lemma_p2", &p2.sub(&d_i0), sp, &pts));
    Ok(report)
}
