use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{LogForm, LogGenerator};
use crate::scalars::{KappaScalar, Rational, SamplePoint};

/// Element of the exterior algebra on dz_1..dz_n, dt_1..dt_N over Q(κ).
/// Keys are bitmasks: bit i is dz_{i+1}, bit n+a is dt_{a+1}.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EvaluatedForm {
    pub n: usize,
    pub terms: BTreeMap<u64, KappaScalar>,
}

/// Sign of moving covector `bit` past the higher covectors already in `mask`.
fn wedge_sign(mask: u64, bit: u32) -> bool {
    let above = mask >> (bit + 1);
    above.count_ones() % 2 == 1
}

/// Sign of `a ∧ b` relative to the sorted mask a|b (true = negative).
fn merge_sign(a: u64, b: u64) -> bool {
    let mut neg = false;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        if wedge_sign(a, bit) {
            neg = !neg;
        }
    }
    neg
}

impl EvaluatedForm {
    pub fn zero(n: usize) -> Self {
        EvaluatedForm { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: KappaScalar) -> Self {
        let mut e = Self::zero(n);
        e.add_term(0, c);
        e
    }

    pub fn add_term(&mut self, mask: u64, c: KappaScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(m, -c);
        }
        out
    }

    pub fn scale(&self, c: &KappaScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        EvaluatedForm { n: self.n, terms: self.terms.iter().map(|(&m, v)| (m, v * c)).collect() }
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(a | b, if merge_sign(a, b) { -c } else { c });
            }
        }
        out
    }

    fn z_mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Number of dz covectors in a term.
    pub fn dz_count(&self, mask: u64) -> u32 {
        (mask & self.z_mask()).count_ones()
    }

    /// Smallest dz-count among nonzero terms (None for 0).
    pub fn min_dz_count(&self) -> Option<u32> {
        self.terms.keys().map(|&m| self.dz_count(m)).min()
    }

    /// Drops every term containing a dz.
    pub fn drop_dz(&self) -> Self {
        let z = self.z_mask();
        EvaluatedForm {
            n: self.n,
            terms: self.terms.iter().filter(|(&m, _)| m & z == 0).map(|(&m, c)| (m, c.clone())).collect(),
        }
    }

    /// Keeps only terms with fewer than `p` dz covectors.
    pub fn below_level(&self, p: u32) -> Self {
        EvaluatedForm {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(&m, _)| self.dz_count(m) < p)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }
}

/// The covector of a generator at a point, as (bit, coefficient) pairs.
pub fn generator_covector(g: LogGenerator, p: &SamplePoint) -> Vec<(u32, Rational)> {
    let n = p.z.len() as u32;
    let zbit = |i: usize| i as u32;
    let tbit = |a: usize| n + a as u32;
    match g {
        LogGenerator::ZZ(i, j) => {
            let inv = Rational::one() / (&p.z[i] - &p.z[j]);
            vec![(zbit(i), inv.clone()), (zbit(j), -inv)]
        }
        LogGenerator::ZT(i, a) => {
            let inv = Rational::one() / (&p.t[a] - &p.z[i]);
            vec![(zbit(i), -inv.clone()), (tbit(a), inv)]
        }
        LogGenerator::TT(a, b) => {
            let inv = Rational::one() / (&p.t[a] - &p.t[b]);
            vec![(tbit(a), inv.clone()), (tbit(b), -inv)]
        }
        LogGenerator::FiberZT(i, a) => {
            let inv = Rational::one() / (&p.t[a] - &p.z[i]);
            vec![(tbit(a), inv)]
        }
    }
}

/// Rational evaluation of one wedge monomial.
fn evaluate_monomial(gens: &[LogGenerator], p: &SamplePoint) -> BTreeMap<u64, Rational> {
    let mut cur: BTreeMap<u64, Rational> = BTreeMap::new();
    cur.insert(0, Rational::one());
    for &g in gens {
        let cov = generator_covector(g, p);
        let mut next: BTreeMap<u64, Rational> = BTreeMap::new();
        for (&mask, c) in &cur {
            for (bit, v) in &cov {
                let b = 1u64 << bit;
                if mask & b != 0 {
                    continue;
                }
                let mut val = c * v;
                if wedge_sign(mask, *bit) {
                    val = -val;
                }
                let e = next.entry(mask | b).or_insert_with(Rational::zero);
                *e += val;
            }
        }
        next.retain(|_, v| !v.is_zero());
        cur = next;
    }
    cur
}

/// dln(u) ↦ du/u at the point, wedge-expanded.
pub fn evaluate(w: &LogForm, p: &SamplePoint) -> EvaluatedForm {
    let mut out = EvaluatedForm::zero(p.z.len());
    for (m, c) in &w.terms {
        for (mask, v) in evaluate_monomial(&m.0, p) {
            out.add_term(mask, c.scale_rational(&v));
        }
    }
    out
}

/// Restriction to the fiber through the point: z frozen, dz dropped.
pub fn evaluate_fiber(w: &LogForm, p: &SamplePoint) -> EvaluatedForm {
    evaluate(&w.project_fiber(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    #[test]
    fn single_generator() {
        let p = SamplePoint { z: vec![int(1)], t: vec![int(3)] };
        let e = evaluate(&LogForm::generator(LogGenerator::ZT(0, 0)), &p);
        assert_eq!(e.terms[&0b01], KappaScalar::from_rational(rat(-1, 2)));
        assert_eq!(e.terms[&0b10], KappaScalar::from_rational(rat(1, 2)));
    }

    #[test]
    fn wedge_anticommutes() {
        let p = SamplePoint { z: vec![int(1), int(5)], t: vec![int(3)] };
        let a = evaluate(&LogForm::generator(LogGenerator::ZT(0, 0)), &p);
        let b = evaluate(&LogForm::generator(LogGenerator::ZT(1, 0)), &p);
        assert_eq!(a.wedge(&b), b.wedge(&a).scale(&KappaScalar::from_int(-1)));
        assert!(a.wedge(&a).is_zero());
    }
}
