use std::collections::HashMap;

use super::free::{words_of_degree, Word};
use super::{LieError, MultiDegree, RootData};
use crate::scalars::{int, ExactMatrix, KappaScalar, Rational};

/// Word basis of the weight-k component of M(μ_1) ⊗ … ⊗ M(μ_n): tuples of
/// words, one per factor, whose multidegrees add up to k.
#[derive(Clone, Debug)]
pub struct WeightComponent {
    pub k: MultiDegree,
    pub basis: Vec<Vec<Word>>,
    index: HashMap<Vec<Word>, usize>,
}

impl WeightComponent {
    /// Splits of k are listed with the first factor taking the most, so for
    /// sl2 the order is that of multi-indices a with a_1 decreasing.
    pub fn new(n: usize, k: &MultiDegree) -> Self {
        let mut basis = Vec::new();
        for split in splits(n, k) {
            let lists: Vec<Vec<Word>> = split.iter().map(words_of_degree).collect();
            let mut acc: Vec<Vec<Word>> = vec![Vec::new()];
            for list in &lists {
                let mut next = Vec::with_capacity(acc.len() * list.len());
                for prefix in &acc {
                    for w in list {
                        let mut t = prefix.clone();
                        t.push(w.clone());
                        next.push(t);
                    }
                }
                acc = next;
            }
            basis.extend(acc);
        }
        let index = basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        WeightComponent { k: k.clone(), basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, t: &[Word]) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// For sl2 data, the multi-index a with basis element f^a v.
    pub fn multi_index(&self, i: usize) -> Vec<usize> {
        self.basis[i].iter().map(|w| w.len()).collect()
    }
}

fn splits(n: usize, k: &MultiDegree) -> Vec<Vec<MultiDegree>> {
    if n == 1 {
        return vec![vec![k.clone()]];
    }
    let mut out = Vec::new();
    for d in k.sub_degrees() {
        let rest = k.checked_sub(&d).unwrap();
        for mut tail in splits(n - 1, &rest) {
            let mut s = vec![d.clone()];
            s.append(&mut tail);
            out.push(s);
        }
    }
    out
}

/// e_i on a single Verma word: Σ_{p : j_p = i} c_p · (word without position p),
/// c_p = (μ − Σ_{q>p} α_{j_q}, α_i).
pub fn e_on_word(rd: &RootData, s: usize, i: usize, w: &[usize]) -> Vec<(Word, Rational)> {
    let r = rd.r();
    let mut out = Vec::new();
    for p in 0..w.len() {
        if w[p] != i {
            continue;
        }
        let tail = MultiDegree::of_word(r, &w[p + 1..]);
        let c = rd.weight_pairing(s, &tail, i);
        if c != int(0) {
            let mut u = w.to_vec();
            u.remove(p);
            out.push((u, c));
        }
    }
    out
}

/// Matrix of f_i: M_k → M_{k+e_i}. With `factor = Some(s)` only factor s
/// is acted on; otherwise the Leibniz sum over all factors.
pub fn f_matrix(rd: &RootData, i: usize, k: &MultiDegree, factor: Option<usize>) -> ExactMatrix {
    let src = WeightComponent::new(rd.n(), k);
    let dst = WeightComponent::new(rd.n(), &k.plus_letter(i));
    let mut m = ExactMatrix::zeros(dst.dim(), src.dim());
    for (col, t) in src.basis.iter().enumerate() {
        for s in factors(rd, factor) {
            let mut u = t.clone();
            u[s].insert(0, i);
            let row = dst.index_of(&u).expect("f_i image lies in the next component");
            m.add_to(row, col, &KappaScalar::one());
        }
    }
    m
}

/// Matrix of e_i: M_{k+e_i} → M_k.
pub fn e_matrix(rd: &RootData, i: usize, k: &MultiDegree, factor: Option<usize>) -> ExactMatrix {
    let src = WeightComponent::new(rd.n(), &k.plus_letter(i));
    let dst = WeightComponent::new(rd.n(), k);
    let mut m = ExactMatrix::zeros(dst.dim(), src.dim());
    for (col, t) in src.basis.iter().enumerate() {
        for s in factors(rd, factor) {
            for (w, c) in e_on_word(rd, s, i, &t[s]) {
                let mut u = t.clone();
                u[s] = w;
                let row = dst.index_of(&u).expect("e_i image lies in the previous component");
                m.add_to(row, col, &KappaScalar::from_rational(c));
            }
        }
    }
    m
}

/// Diagonal matrix of h_i on M_k.
pub fn h_matrix(rd: &RootData, i: usize, k: &MultiDegree, factor: Option<usize>) -> ExactMatrix {
    let comp = WeightComponent::new(rd.n(), k);
    let mut m = ExactMatrix::zeros(comp.dim(), comp.dim());
    for (col, t) in comp.basis.iter().enumerate() {
        let mut v = Rational::from_integer(0.into());
        for s in factors(rd, factor) {
            v += rd.weight_pairing(s, &MultiDegree::of_word(rd.r(), &t[s]), i);
        }
        m.set(col, col, KappaScalar::from_rational(v));
    }
    m
}

/// f_i on M^c: M^c_k → M^c_{k+e_i}, the transpose of e_i.
pub fn f_matrix_contragredient(rd: &RootData, i: usize, k: &MultiDegree, factor: Option<usize>) -> ExactMatrix {
    e_matrix(rd, i, k, factor).transpose()
}

/// e_i on M^c: M^c_{k+e_i} → M^c_k, the transpose of f_i.
pub fn e_matrix_contragredient(rd: &RootData, i: usize, k: &MultiDegree, factor: Option<usize>) -> ExactMatrix {
    f_matrix(rd, i, k, factor).transpose()
}

fn factors(rd: &RootData, factor: Option<usize>) -> Vec<usize> {
    match factor {
        Some(s) => vec![s],
        None => (0..rd.n()).collect(),
    }
}

/// Weight-homogeneous vector in M(μ_1) ⊗ … ⊗ M(μ_n), in the word basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    pub k: MultiDegree,
    pub coeffs: Vec<KappaScalar>,
}

impl TensorVector {
    pub fn vacuum(rd: &RootData) -> Self {
        TensorVector { k: MultiDegree::zero(rd.r()), coeffs: vec![KappaScalar::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

pub fn act_f(rd: &RootData, i: usize, v: &TensorVector) -> TensorVector {
    let m = f_matrix(rd, i, &v.k, None);
    TensorVector { k: v.k.plus_letter(i), coeffs: m.mul_vec(&v.coeffs) }
}

/// e_i v; the zero vector of the same component when k_i = 0.
pub fn act_e(rd: &RootData, i: usize, v: &TensorVector) -> TensorVector {
    match v.k.minus_letter(i) {
        None => TensorVector { k: v.k.clone(), coeffs: vec![KappaScalar::zero(); v.coeffs.len()] },
        Some(k) => TensorVector { k: k.clone(), coeffs: e_matrix(rd, i, &k, None).mul_vec(&v.coeffs) },
    }
}

/// Vector in a single Verma module M(μ_s).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VermaVector {
    pub factor: usize,
    pub inner: TensorVector,
}

impl VermaVector {
    pub fn highest(rd: &RootData, factor: usize) -> Self {
        VermaVector { factor, inner: TensorVector::vacuum(&rd.single_factor(factor)) }
    }

    pub fn act_f(&self, rd: &RootData, i: usize) -> Self {
        VermaVector { factor: self.factor, inner: act_f(&rd.single_factor(self.factor), i, &self.inner) }
    }

    pub fn act_e(&self, rd: &RootData, i: usize) -> Self {
        VermaVector { factor: self.factor, inner: act_e(&rd.single_factor(self.factor), i, &self.inner) }
    }
}

/// Ω_ij = ½ h⊗h + e⊗f + f⊗e acting through factors i and j on M_k.
pub fn casimir_sl2(rd: &RootData, i: usize, j: usize, k: &MultiDegree) -> Result<ExactMatrix, LieError> {
    if rd.r() != 1 {
        return Err(LieError::Unsupported("the Casimir is built in only for sl2 data (r = 1)".into()));
    }
    if i == j || i >= rd.n() || j >= rd.n() {
        return Err(LieError::Shape(format!("Casimir needs two distinct factors < {}, got ({i},{j})", rd.n())));
    }
    let half = KappaScalar::from_rational(Rational::new(1.into(), 2.into()));
    let mut m = h_matrix(rd, 0, k, Some(i)).mul(&h_matrix(rd, 0, k, Some(j))).scale(&half);
    m = m.add(&e_matrix(rd, 0, k, Some(i)).mul(&f_matrix(rd, 0, k, Some(j))));
    if let Some(km) = k.minus_letter(0) {
        m = m.add(&f_matrix(rd, 0, &km, Some(i)).mul(&e_matrix(rd, 0, &km, Some(j))));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn md(v: &[usize]) -> MultiDegree {
        MultiDegree(v.to_vec())
    }

    #[test]
    fn sl2_e_f_squared() {
        // e f^2 v = 2(m-1) f v, here m = 7
        let rd = RootData::sl2(&[int(7)]).unwrap();
        let e = e_matrix(&rd, 0, &md(&[1]), None);
        assert_eq!(e.get(0, 0), &KappaScalar::from_int(12));
    }

    #[test]
    fn leibniz_on_two_factors() {
        let rd = RootData::sl2(&[int(1), int(3)]).unwrap();
        let v = act_f(&rd, 0, &TensorVector::vacuum(&rd));
        assert_eq!(v.coeffs, vec![KappaScalar::one(), KappaScalar::one()]);
    }

    #[test]
    fn component_order_for_sl2() {
        let c = WeightComponent::new(3, &md(&[2]));
        let idx: Vec<Vec<usize>> = (0..c.dim()).map(|i| c.multi_index(i)).collect();
        assert_eq!(idx[0], vec![2, 0, 0]);
        assert_eq!(idx[1], vec![1, 1, 0]);
        assert_eq!(idx.len(), 6);
    }

    #[test]
    fn casimir_rejects_higher_rank() {
        let rd = RootData::new(
            vec![vec![int(2), int(-1)], vec![int(-1), int(2)]],
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
        )
        .unwrap();
        assert!(casimir_sl2(&rd, 0, 1, &md(&[1, 0])).is_err());
    }
}
