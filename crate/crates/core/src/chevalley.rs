//! Chevalley chain complexes C_•(n, M)_λ with M = M(μ_1)^c ⊗ … ⊗ M(μ_n)^c,
//! their duals and exact homology.

use std::collections::HashMap;

use thiserror::Error;

use crate::liealg::{
    bracket, f_matrix_contragredient, lyndon_upto, LieElement, MultiDegree, RootData, WeightComponent, Word,
};
use crate::scalars::{ExactMatrix, KappaScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("d∘d ≠ 0 in degree {0}")]
    NotAComplex(usize),
    #[error("multidegree has {got} entries, root data has r = {r}")]
    Rank { got: usize, r: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// maps[i]: C_{i+1} → C_i
    Homological,
    /// maps[i]: C^i → C^{i+1}
    Cohomological,
}

/// Finite complex with spaces in degrees 0..=top and exact differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub direction: Direction,
    pub dims: Vec<usize>,
    /// maps[i] connects degrees i and i+1 (direction decides which way).
    pub maps: Vec<ExactMatrix>,
    pub labels: Vec<Vec<String>>,
}

impl GradedComplex {
    pub fn new(direction: Direction, dims: Vec<usize>, maps: Vec<ExactMatrix>, labels: Vec<Vec<String>>) -> Self {
        debug_assert_eq!(maps.len() + 1, dims.len().max(1));
        GradedComplex { direction, dims, maps, labels }
    }

    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// Differential leaving degree i, if any.
    pub fn outgoing(&self, i: usize) -> Option<&ExactMatrix> {
        match self.direction {
            Direction::Homological => i.checked_sub(1).and_then(|j| self.maps.get(j)),
            Direction::Cohomological => self.maps.get(i),
        }
    }

    /// Differential arriving in degree i, if any.
    pub fn incoming(&self, i: usize) -> Option<&ExactMatrix> {
        match self.direction {
            Direction::Homological => self.maps.get(i),
            Direction::Cohomological => i.checked_sub(1).and_then(|j| self.maps.get(j)),
        }
    }

    /// Checks d∘d = 0; returns the first offending degree.
    pub fn check_square_zero(&self) -> Result<(), usize> {
        for i in 1..self.maps.len() {
            let prod = match self.direction {
                Direction::Homological => self.maps[i - 1].mul(&self.maps[i]),
                Direction::Cohomological => self.maps[i].mul(&self.maps[i - 1]),
            };
            if !prod.is_zero() {
                return Err(i);
            }
        }
        Ok(())
    }

    /// Euler characteristic Σ(−1)^i dim C_i.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Reported label of internal degree i: −i for chains, i for cochains.
    pub fn display_degree(&self, i: usize) -> i64 {
        match self.direction {
            Direction::Homological => -(i as i64),
            Direction::Cohomological => i as i64,
        }
    }

    /// Specializes all differentials at κ = κ₀ (None at a pole).
    pub fn specialize(&self, k0: &Rational) -> Option<Self> {
        let maps = self.maps.iter().map(|m| m.specialize(k0)).collect::<Option<Vec<_>>>()?;
        Some(GradedComplex { maps, ..self.clone() })
    }
}

/// Transposed differentials, reversed direction; dims are unchanged.
pub fn dual_complex(c: &GradedComplex) -> GradedComplex {
    GradedComplex {
        direction: match c.direction {
            Direction::Homological => Direction::Cohomological,
            Direction::Cohomological => Direction::Homological,
        },
        dims: c.dims.clone(),
        maps: c.maps.iter().map(|m| m.transpose()).collect(),
        labels: c.labels.iter().map(|l| l.iter().map(|s| format!("{s}^v")).collect()).collect(),
    }
}

/// dim ker(outgoing) − rank(incoming), per internal degree.
pub fn homology_dims(c: &GradedComplex) -> Vec<usize> {
    (0..c.dims.len())
        .map(|i| {
            let out = c.outgoing(i).map_or(0, |m| m.rank());
            let inc = c.incoming(i).map_or(0, |m| m.rank());
            c.dims[i] - out - inc
        })
        .collect()
}

/// Kernel basis of the outgoing differential in each degree (cycles).
pub fn cycle_bases(c: &GradedComplex) -> Vec<Vec<Vec<KappaScalar>>> {
    (0..c.dims.len())
        .map(|i| match c.outgoing(i) {
            Some(m) => m.kernel_basis(),
            None => (0..c.dims[i])
                .map(|j| {
                    let mut v = vec![KappaScalar::zero(); c.dims[i]];
                    v[j] = KappaScalar::one();
                    v
                })
                .collect(),
        })
        .collect()
}

/// g_{i_1} ∧ … ∧ g_{i_l} ⊗ φ with i_1 < … < i_l indexing the Lyndon list
/// and φ a word-tuple basis covector of M^c.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainBasisElement {
    pub lie: Vec<usize>,
    pub module: Vec<Word>,
}

#[derive(Clone, Debug)]
pub struct ChevalleyComplex {
    pub rd: RootData,
    pub k: MultiDegree,
    pub lyndon: Vec<Word>,
    pub chains: Vec<Vec<ChainBasisElement>>,
    pub complex: GradedComplex,
}

impl ChevalleyComplex {
    pub fn index_of(&self, l: usize, e: &ChainBasisElement) -> Option<usize> {
        self.chains.get(l)?.iter().position(|x| x == e)
    }

    /// Degree of the module part of a chain basis element.
    pub fn module_degree(&self, e: &ChainBasisElement) -> MultiDegree {
        let mut d = self.k.clone();
        for &g in &e.lie {
            d = d.checked_sub(&MultiDegree::of_word(self.rd.r(), &self.lyndon[g])).unwrap();
        }
        d
    }

    pub fn label(&self, e: &ChainBasisElement) -> String {
        let letters = |w: &Word| -> String { w.iter().map(|l| format!("{}", l + 1)).collect() };
        let lie: Vec<String> = e.lie.iter().map(|&g| format!("f[{}]", letters(&self.lyndon[g]))).collect();
        let module: Vec<String> = e
            .module
            .iter()
            .map(|w| if w.is_empty() { "v".to_string() } else { format!("f[{}]v", letters(w)) })
            .collect();
        let m = module.join("*");
        if lie.is_empty() {
            m
        } else {
            format!("{} (x) {}", lie.join("^"), m)
        }
    }
}

struct ActionCache<'a> {
    rd: &'a RootData,
    lyndon: &'a [Word],
    expansions: Vec<Vec<(Word, Rational)>>,
    mats: HashMap<(usize, MultiDegree), ExactMatrix>,
}

impl ActionCache<'_> {
    /// Matrix of Lyndon element g acting M^c_d → M^c_{d + deg g}.
    fn action(&mut self, g: usize, d: &MultiDegree) -> &ExactMatrix {
        let key = (g, d.clone());
        if !self.mats.contains_key(&key) {
            let r = self.rd.r();
            let n = self.rd.n();
            let deg = MultiDegree::of_word(r, &self.lyndon[g]);
            let rows = WeightComponent::new(n, &d.add(&deg)).dim();
            let cols = WeightComponent::new(n, d).dim();
            let mut total = ExactMatrix::zeros(rows, cols);
            for (w, c) in &self.expansions[g] {
                // f_{j1}···f_{jm} applies f_{jm} first
                let mut cur = d.clone();
                let mut m = ExactMatrix::identity(cols);
                for &j in w.iter().rev() {
                    m = f_matrix_contragredient(self.rd, j, &cur, None).mul(&m);
                    cur = cur.plus_letter(j);
                }
                total = total.add(&m.scale(&KappaScalar::from_rational(c.clone())));
            }
            self.mats.insert(key.clone(), total);
        }
        &self.mats[&key]
    }
}

/// Sorts `v` ascending and returns the permutation sign, or None on a repeat.
pub(crate) fn sort_with_sign(v: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Builds C_•(n, M^c)_λ for λ = −Σ k_i α_i with differential
/// d(g_1∧…∧g_l⊗x) = Σ_i (−1)^{l−i} g_1..ĝ_i..g_l ⊗ g_i x
///                + Σ_{i<j} (−1)^{l+i+j} [g_i,g_j]∧g_1..ĝ_i..ĝ_j..g_l ⊗ x,
/// which gives d(g⊗x) = gx and d(g_1∧g_2⊗x) = g_1⊗g_2x − g_2⊗g_1x − [g_1,g_2]⊗x.
pub fn build_chain_complex(rd: &RootData, k: &MultiDegree) -> Result<ChevalleyComplex, ChevalleyError> {
    if k.r() != rd.r() {
        return Err(ChevalleyError::Rank { got: k.r(), r: rd.r() });
    }
    let r = rd.r();
    let n = rd.n();
    let lyndon = lyndon_upto(k);
    let degs: Vec<MultiDegree> = lyndon.iter().map(|w| MultiDegree::of_word(r, w)).collect();
    let position: HashMap<Word, usize> = lyndon.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

    // chain bases by degree
    let mut chains: Vec<Vec<ChainBasisElement>> = Vec::new();
    let mut sets: Vec<(Vec<usize>, MultiDegree)> = vec![(Vec::new(), MultiDegree::zero(r))];
    loop {
        let mut level = Vec::new();
        for (s, used) in &sets {
            let rest = k.checked_sub(used).unwrap();
            for t in WeightComponent::new(n, &rest).basis {
                level.push(ChainBasisElement { lie: s.clone(), module: t });
            }
        }
        chains.push(level);
        let mut next = Vec::new();
        for (s, used) in &sets {
            let start = s.last().map_or(0, |&x| x + 1);
            for g in start..lyndon.len() {
                let u = used.add(&degs[g]);
                if u.le(k) {
                    let mut s2 = s.clone();
                    s2.push(g);
                    next.push((s2, u));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        sets = next;
    }
    // drop empty trailing degrees
    while chains.len() > 1 && chains.last().unwrap().is_empty() {
        chains.pop();
    }

    let index: Vec<HashMap<ChainBasisElement, usize>> = chains
        .iter()
        .map(|lvl| lvl.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();

    let mut cache = ActionCache {
        rd,
        lyndon: &lyndon,
        expansions: lyndon
            .iter()
            .map(|w| LieElement::basis(w.clone()).expand().into_iter().collect())
            .collect(),
        mats: HashMap::new(),
    };
    let mut brackets: HashMap<(usize, usize), Vec<(usize, Rational)>> = HashMap::new();

    let mut maps = Vec::new();
    for l in 1..chains.len() {
        let mut d = ExactMatrix::zeros(chains[l - 1].len(), chains[l].len());
        for (col, e) in chains[l].iter().enumerate() {
            let module_deg = {
                let mut m = k.clone();
                for &g in &e.lie {
                    m = m.checked_sub(&degs[g]).unwrap();
                }
                m
            };
            let src_comp = WeightComponent::new(n, &module_deg);
            let src_idx = src_comp.index_of(&e.module).unwrap();
            for i in 0..l {
                let sign = if (l - 1 - i) % 2 == 0 { 1 } else { -1 };
                let g = e.lie[i];
                let rest: Vec<usize> = e.lie.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect();
                let tgt_deg = module_deg.add(&degs[g]);
                let tgt_comp = WeightComponent::new(n, &tgt_deg);
                let act = cache.action(g, &module_deg);
                for (row, t) in tgt_comp.basis.iter().enumerate() {
                    let c = act.get(row, src_idx);
                    if c.is_zero() {
                        continue;
                    }
                    let target = ChainBasisElement { lie: rest.clone(), module: t.clone() };
                    let ti = index[l - 1][&target];
                    let v = if sign > 0 { c.clone() } else { -c };
                    d.add_to(ti, col, &v);
                }
            }
            for i in 0..l {
                for j in (i + 1)..l {
                    // 1-based positions i+1, j+1
                    let sign = if (l + i + j) % 2 == 0 { 1 } else { -1 };
                    let (gi, gj) = (e.lie[i], e.lie[j]);
                    let br = brackets.entry((gi, gj)).or_insert_with(|| {
                        let b = bracket(&LieElement::basis(lyndon[gi].clone()), &LieElement::basis(lyndon[gj].clone()));
                        b.terms.into_iter().map(|(w, c)| (position[&w], c)).collect()
                    });
                    for (h, c) in br.iter() {
                        let mut s: Vec<usize> = vec![*h];
                        s.extend(e.lie.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &x)| x));
                        let Some(perm) = sort_with_sign(&mut s) else { continue };
                        let target = ChainBasisElement { lie: s, module: e.module.clone() };
                        let ti = index[l - 1][&target];
                        let v = KappaScalar::from_rational(c.clone() * Rational::from_integer((sign * perm).into()));
                        d.add_to(ti, col, &v);
                    }
                }
            }
        }
        maps.push(d);
    }

    let dims = chains.iter().map(|c| c.len()).collect();
    let mut cc = ChevalleyComplex {
        rd: rd.clone(),
        k: k.clone(),
        lyndon,
        chains,
        complex: GradedComplex::new(Direction::Homological, dims, maps, Vec::new()),
    };
    cc.complex.labels = cc.chains.iter().map(|lvl| lvl.iter().map(|e| cc.label(e)).collect()).collect();
    if let Err(i) = cc.complex.check_square_zero() {
        return Err(ChevalleyError::NotAComplex(i));
    }
    Ok(cc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn sl2_single_factor() {
        let rd = RootData::sl2(&[int(5)]).unwrap();
        let c = build_chain_complex(&rd, &MultiDegree(vec![1])).unwrap();
        assert_eq!(c.complex.dims, vec![1, 1]);
        assert_eq!(c.complex.maps[0].get(0, 0), &KappaScalar::from_int(5));
        assert_eq!(homology_dims(&c.complex), vec![0, 0]);
    }

    #[test]
    fn rank_two_shape() {
        let rd = RootData::new(
            vec![vec![int(2), int(-1)], vec![int(-1), int(2)]],
            vec![vec![int(3), int(1)]],
            vec![vec![int(5)]],
        )
        .unwrap();
        let c = build_chain_complex(&rd, &MultiDegree(vec![1, 1])).unwrap();
        assert_eq!(c.complex.dims, vec![2, 3, 1]);
        assert_eq!(c.chains[2][0].lie, vec![0, 1]);
    }

    #[test]
    fn sort_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        let mut w = vec![1, 0];
        assert_eq!(sort_with_sign(&mut w), Some(-1));
        let mut x = vec![1, 1];
        assert_eq!(sort_with_sign(&mut x), None);
    }
}
