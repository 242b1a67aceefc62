use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::chevalley::sort_with_sign;
use crate::scalars::KappaScalar;

/// Logarithmic 1-forms on U_{n,N}. Indices are 0-based (printed 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogGenerator {
    /// dln(z_i − z_j), i < j
    ZZ(usize, usize),
    /// dln(t_a − z_i), stored as (i, a)
    ZT(usize, usize),
    /// dln(t_a − t_b), a < b
    TT(usize, usize),
    /// dt_a/(t_a − z_i), the fiber part of ZT(i, a)
    FiberZT(usize, usize),
}

impl LogGenerator {
    pub fn zz(i: usize, j: usize) -> Self {
        assert_ne!(i, j);
        LogGenerator::ZZ(i.min(j), i.max(j))
    }

    pub fn tt(a: usize, b: usize) -> Self {
        assert_ne!(a, b);
        LogGenerator::TT(a.min(b), a.max(b))
    }

    /// Image under the substitution t_a ↦ t_{σ(a)}.
    pub fn permute_t(self, sigma: &[usize]) -> Self {
        match self {
            LogGenerator::ZZ(..) => self,
            LogGenerator::ZT(i, a) => LogGenerator::ZT(i, sigma[a]),
            LogGenerator::FiberZT(i, a) => LogGenerator::FiberZT(i, sigma[a]),
            LogGenerator::TT(a, b) => LogGenerator::tt(sigma[a], sigma[b]),
        }
    }

    pub fn max_z(self) -> Option<usize> {
        match self {
            LogGenerator::ZZ(_, j) => Some(j),
            LogGenerator::ZT(i, _) | LogGenerator::FiberZT(i, _) => Some(i),
            LogGenerator::TT(..) => None,
        }
    }

    pub fn max_t(self) -> Option<usize> {
        match self {
            LogGenerator::ZZ(..) => None,
            LogGenerator::ZT(_, a) | LogGenerator::FiberZT(_, a) => Some(a),
            LogGenerator::TT(_, b) => Some(b),
        }
    }

    /// Whether the generator involves t_a.
    pub fn involves_t(self, a: usize) -> bool {
        match self {
            LogGenerator::ZZ(..) => false,
            LogGenerator::ZT(_, b) | LogGenerator::FiberZT(_, b) => a == b,
            LogGenerator::TT(b, c) => a == b || a == c,
        }
    }
}

impl fmt::Display for LogGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LogGenerator::ZZ(i, j) => write!(f, "dln(z{}-z{})", i + 1, j + 1),
            LogGenerator::ZT(i, a) => write!(f, "dln(t{}-z{})", a + 1, i + 1),
            LogGenerator::TT(a, b) => write!(f, "dln(t{}-t{})", a + 1, b + 1),
            LogGenerator::FiberZT(i, a) => write!(f, "dt{}/(t{}-z{})", a + 1, a + 1, i + 1),
        }
    }
}

/// Wedge of distinct generators in canonical (increasing) order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LogMonomial(pub Vec<LogGenerator>);

impl LogMonomial {
    pub fn one() -> Self {
        LogMonomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Sorts arbitrary generator sequences; None if a generator repeats.
    pub fn normalize(gens: Vec<LogGenerator>) -> Option<(i32, Self)> {
        let mut keyed: Vec<(LogGenerator, usize)> = gens.into_iter().enumerate().map(|(i, g)| (g, i)).collect();
        keyed.sort();
        if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        let mut perm: Vec<usize> = keyed.iter().map(|&(_, i)| i).collect();
        let sign = sort_with_sign(&mut perm).expect("indices are distinct");
        Some((sign, LogMonomial(keyed.into_iter().map(|(g, _)| g).collect())))
    }
}

impl fmt::Display for LogMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// Finite Q(κ)-combination of log monomials; zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogForm {
    pub terms: BTreeMap<LogMonomial, KappaScalar>,
}

impl LogForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: KappaScalar) -> Self {
        let mut f = Self::zero();
        f.add_term(LogMonomial::one(), c);
        f
    }

    pub fn generator(g: LogGenerator) -> Self {
        Self::monomial(vec![g], KappaScalar::one())
    }

    /// c · g_1 ∧ … ∧ g_k in the given order.
    pub fn monomial(gens: Vec<LogGenerator>, c: KappaScalar) -> Self {
        let mut f = Self::zero();
        if let Some((sign, m)) = LogMonomial::normalize(gens) {
            f.add_term(m, if sign > 0 { c } else { -c });
        }
        f
    }

    pub fn add_term(&mut self, m: LogMonomial, c: KappaScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms (None for 0 or inhomogeneous forms).
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-KappaScalar::one()))
    }

    pub fn scale(&self, c: &KappaScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LogForm { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut gens = m1.0.clone();
                gens.extend_from_slice(&m2.0);
                if let Some((sign, m)) = LogMonomial::normalize(gens) {
                    let c = c1 * c2;
                    out.add_term(m, if sign > 0 { c } else { -c });
                }
            }
        }
        out
    }

    /// Applies a generator map termwise (a ring map on the exterior algebra).
    pub fn map_generators(&self, f: impl Fn(LogGenerator) -> Option<LogGenerator>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let Some(gens) = m.0.iter().map(|&g| f(g)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            if let Some((sign, mm)) = LogMonomial::normalize(gens) {
                out.add_term(mm, if sign > 0 { c.clone() } else { -c });
            }
        }
        out
    }

    /// w(t_σ(1), …, t_σ(N)).
    pub fn permute_t(&self, sigma: &[usize]) -> Self {
        self.map_generators(|g| Some(g.permute_t(sigma)))
    }

    /// Fiber projection p: keep the dt-part of each generator
    /// (ZT ↦ FiberZT, ZZ ↦ 0, TT and FiberZT unchanged).
    pub fn project_fiber(&self) -> Self {
        self.map_generators(|g| match g {
            LogGenerator::ZZ(..) => None,
            LogGenerator::ZT(i, a) => Some(LogGenerator::FiberZT(i, a)),
            other => Some(other),
        })
    }

    /// Replaces each fiber fraction dt_a/(t_a − z_i) by dln(t_a − z_i).
    pub fn lift_fiber(&self) -> Self {
        self.map_generators(|g| match g {
            LogGenerator::FiberZT(i, a) => Some(LogGenerator::ZT(i, a)),
            other => Some(other),
        })
    }

    /// Number of z- and t-variables referenced (max index + 1).
    pub fn extent(&self) -> (usize, usize) {
        let mut n = 0;
        let mut big_n = 0;
        for m in self.terms.keys() {
            for g in &m.0 {
                if let Some(i) = g.max_z() {
                    n = n.max(i + 1);
                }
                if let Some(a) = g.max_t() {
                    big_n = big_n.max(a + 1);
                }
            }
        }
        (n, big_n)
    }
}

/// Splits a coefficient into a sign and a printable magnitude. A leading
/// minus is pulled out unless it belongs to one term of a sum.
fn coefficient_prefix(c: &KappaScalar) -> (bool, String) {
    let s = c.to_string();
    let single_term_numer = c.numer().coeffs().iter().filter(|x| !x.is_zero()).count() == 1;
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) if single_term_numer => (true, b.to_string()),
        _ => (false, s.clone()),
    };
    if body.contains(' ') {
        (neg, format!("({body})"))
    } else {
        (neg, body)
    }
}

impl fmt::Display for LogForm {
    /// `-k*dln(t1-z1) + 1/2*dln(z1-z2)^dln(t1-z2)`; canonical term order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (neg, body) = coefficient_prefix(c);
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.0.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{body}*{m}")?;
            }
        }
        Ok(())
    }
}
