use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{LieError, MultiDegree};
use crate::scalars::Rational;

/// A word f_{j_1}···f_{j_m} over the letters 0..r.
pub type Word = Vec<usize>;

/// Element of the free associative algebra on f_1..f_r.
pub type AssocPoly = BTreeMap<Word, Rational>;

/// Element of the free Lie algebra, in coordinates of the Lyndon basis
/// (keys are Lyndon words standing for their standard bracketings).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    pub terms: BTreeMap<Word, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(i: usize) -> Self {
        Self::basis(vec![i])
    }

    /// The basis element attached to a Lyndon word.
    pub fn basis(w: Word) -> Self {
        debug_assert!(is_lyndon(&w));
        let mut terms = BTreeMap::new();
        terms.insert(w, Rational::one());
        LieElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (w, v) in &other.terms {
            add_term(&mut self.terms, w, &(v * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Expansion in the free associative algebra.
    pub fn expand(&self) -> AssocPoly {
        let mut out = AssocPoly::new();
        for (w, c) in &self.terms {
            for (u, d) in expand_lyndon(w) {
                add_term(&mut out, &u, &(c * d));
            }
        }
        out
    }

    /// Multidegree if homogeneous (None for 0 or mixed).
    pub fn multidegree(&self, r: usize) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(|w| MultiDegree::of_word(r, w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

fn add_term(map: &mut BTreeMap<Word, Rational>, w: &Word, c: &Rational) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(w.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        map.remove(w);
    }
}

/// w is Lyndon iff it is nonempty and strictly smaller than each proper suffix.
pub fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// All words with letter counts `k`, in lexicographic order.
pub fn words_of_degree(k: &MultiDegree) -> Vec<Word> {
    let mut out = Vec::new();
    let mut counts = k.0.clone();
    let mut cur = Vec::with_capacity(k.total());
    fn rec(counts: &mut [usize], cur: &mut Word, out: &mut Vec<Word>, left: usize) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for l in 0..counts.len() {
            if counts[l] > 0 {
                counts[l] -= 1;
                cur.push(l);
                rec(counts, cur, out, left - 1);
                cur.pop();
                counts[l] += 1;
            }
        }
    }
    let total = k.total();
    rec(&mut counts, &mut cur, &mut out, total);
    out
}

/// Lyndon words of multidegree `k` in lexicographic order; their standard
/// bracketings form a basis of n_λ.
pub fn lyndon_words(k: &MultiDegree) -> Vec<Word> {
    if k.is_zero() {
        return Vec::new();
    }
    words_of_degree(k).into_iter().filter(|w| is_lyndon(w)).collect()
}

/// w = uv with v the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[usize]) -> Option<(Word, Word)> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .map(|i| (w[..i].to_vec(), w[i..].to_vec()))
}

/// P(w): single letters stay, otherwise [P(u), P(v)] for the standard
/// factorization, expanded in the free associative algebra.
pub fn expand_lyndon(w: &[usize]) -> AssocPoly {
    match standard_factorization(w) {
        None => {
            let mut m = AssocPoly::new();
            m.insert(w.to_vec(), Rational::one());
            m
        }
        Some((u, v)) => commutator(&expand_lyndon(&u), &expand_lyndon(&v)),
    }
}

pub fn assoc_mul(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (u, c) in a {
        for (v, d) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            add_term(&mut out, &w, &(c * d));
        }
    }
    out
}

pub fn commutator(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = assoc_mul(a, b);
    for (w, c) in assoc_mul(b, a) {
        add_term(&mut out, &w, &(-c));
    }
    out
}

/// Rewrites a Lie polynomial given in the associative algebra into Lyndon
/// coordinates by peeling off the smallest word: P(w) = w + larger words.
pub fn to_lyndon_coords(p: &AssocPoly) -> Result<LieElement, LieError> {
    let mut rest = p.clone();
    let mut out = LieElement::zero();
    while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
        if !is_lyndon(&w) {
            return Err(LieError::NotLie(format!("leading word {w:?} is not Lyndon")));
        }
        for (u, d) in expand_lyndon(&w) {
            add_term(&mut rest, &u, &(-(&c * d)));
        }
        add_term(&mut out.terms, &w, &c);
    }
    Ok(out)
}

pub fn bracket(x: &LieElement, y: &LieElement) -> LieElement {
    let p = commutator(&x.expand(), &y.expand());
    to_lyndon_coords(&p).expect("commutator of Lie elements is a Lie element")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_small_cases() {
        assert_eq!(lyndon_words(&MultiDegree(vec![1, 0])), vec![vec![0]]);
        assert_eq!(lyndon_words(&MultiDegree(vec![1, 1])), vec![vec![0, 1]]);
        assert_eq!(lyndon_words(&MultiDegree(vec![2, 1])), vec![vec![0, 0, 1]]);
        assert!(lyndon_words(&MultiDegree(vec![2, 0])).is_empty());
    }

    #[test]
    fn standard_bracketing_leading_word() {
        for w in lyndon_words(&MultiDegree(vec![2, 2, 1])) {
            let p = expand_lyndon(&w);
            let (first, c) = p.iter().next().unwrap();
            assert_eq!(first, &w);
            assert!(c.is_one());
        }
    }

    #[test]
    fn bracket_basics() {
        let f1 = LieElement::generator(0);
        let f2 = LieElement::generator(1);
        assert!(bracket(&f1, &f1).is_zero());
        assert_eq!(bracket(&f1, &f2), LieElement::basis(vec![0, 1]));
        assert_eq!(bracket(&f2, &f1), LieElement::basis(vec![0, 1]).scale(&-Rational::one()));
    }
}
