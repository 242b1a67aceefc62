use std::fmt;

use super::LieError;
use crate::scalars::{int, Rational};

/// Gram data of the simple roots α_1..α_r and the highest weights μ_1..μ_n.
/// Only pairings are stored; weights are never materialized as vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    r: usize,
    n: usize,
    b: Vec<Vec<Rational>>,
    mu_alpha: Vec<Vec<Rational>>,
    mu_mu: Vec<Vec<Rational>>,
}

impl RootData {
    pub fn new(
        b: Vec<Vec<Rational>>,
        mu_alpha: Vec<Vec<Rational>>,
        mu_mu: Vec<Vec<Rational>>,
    ) -> Result<Self, LieError> {
        let r = b.len();
        let n = mu_mu.len();
        if r == 0 {
            return Err(LieError::Shape("B must have at least one row".into()));
        }
        if n == 0 {
            return Err(LieError::Shape("at least one module factor is required".into()));
        }
        check_square_symmetric(&b, "B")?;
        check_square_symmetric(&mu_mu, "muMu")?;
        if mu_alpha.len() != n || mu_alpha.iter().any(|row| row.len() != r) {
            return Err(LieError::Shape(format!("muAlpha must be {n}x{r}")));
        }
        Ok(RootData { r, n, b, mu_alpha, mu_mu })
    }

    /// sl2 data with highest weights m_i: (μ_i,μ_j) = m_i m_j / 2,
    /// (μ_i,α) = m_i, (α,α) = 2.
    pub fn sl2(m: &[Rational]) -> Result<Self, LieError> {
        let half = Rational::new(1.into(), 2.into());
        let mu_mu = m
            .iter()
            .map(|a| m.iter().map(|b| a * b * &half).collect())
            .collect();
        let mu_alpha = m.iter().map(|a| vec![a.clone()]).collect();
        Self::new(vec![vec![int(2)]], mu_alpha, mu_mu)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_sl2(&self) -> bool {
        self.r == 1 && self.b[0][0] == int(2)
    }

    /// (α_i, α_j)
    pub fn alpha_alpha(&self, i: usize, j: usize) -> &Rational {
        &self.b[i][j]
    }

    /// (μ_s, α_i)
    pub fn mu_alpha(&self, s: usize, i: usize) -> &Rational {
        &self.mu_alpha[s][i]
    }

    /// (μ_s, μ_u)
    pub fn mu_mu(&self, s: usize, u: usize) -> &Rational {
        &self.mu_mu[s][u]
    }

    /// The sl2 highest weights, when the data came from [`RootData::sl2`].
    pub fn sl2_weights(&self) -> Option<Vec<Rational>> {
        self.is_sl2().then(|| (0..self.n).map(|s| self.mu_alpha[s][0].clone()).collect())
    }

    /// (μ_s − Σ_l d_l α_l, α_i): the h_i-eigenvalue of a weight vector of
    /// multidegree `d` in factor `s`.
    pub fn weight_pairing(&self, s: usize, d: &MultiDegree, i: usize) -> Rational {
        let mut v = self.mu_alpha[s][i].clone();
        for (l, &dl) in d.0.iter().enumerate() {
            if dl > 0 {
                v -= &self.b[l][i] * int(dl as i64);
            }
        }
        v
    }

    /// Root data for factor `s` alone (used for single Verma modules).
    pub fn single_factor(&self, s: usize) -> Self {
        RootData {
            r: self.r,
            n: 1,
            b: self.b.clone(),
            mu_alpha: vec![self.mu_alpha[s].clone()],
            mu_mu: vec![vec![self.mu_mu[s][s].clone()]],
        }
    }
}

fn check_square_symmetric(m: &[Vec<Rational>], name: &str) -> Result<(), LieError> {
    let k = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != k {
            return Err(LieError::Shape(format!("{name} must be square")));
        }
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(LieError::Shape(format!("{name} must be symmetric (entry {i},{j})")));
            }
        }
    }
    Ok(())
}

/// Multidegree k = (k_1..k_r) of λ = −Σ k_i α_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree(pub Vec<usize>);

impl MultiDegree {
    pub fn zero(r: usize) -> Self {
        MultiDegree(vec![0; r])
    }

    pub fn unit(r: usize, i: usize) -> Self {
        let mut v = vec![0; r];
        v[i] = 1;
        MultiDegree(v)
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        MultiDegree(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiDegree)
    }

    pub fn plus_letter(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiDegree(v)
    }

    pub fn minus_letter(&self, i: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[i] = v[i].checked_sub(1)?;
        Some(MultiDegree(v))
    }

    pub fn le(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// All d with 0 ≤ d ≤ self, in decreasing lexicographic order.
    pub fn sub_degrees(&self) -> Vec<MultiDegree> {
        let mut out = vec![Vec::new()];
        for &ki in &self.0 {
            let mut next = Vec::new();
            for prefix in &out {
                for v in (0..=ki).rev() {
                    let mut p: Vec<usize> = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiDegree).collect()
    }

    /// Multidegree of a word over [r].
    pub fn of_word(r: usize, w: &[usize]) -> Self {
        let mut v = vec![0; r];
        for &l in w {
            v[l] += 1;
        }
        MultiDegree(v)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Coloring π: [N] → [r] of the t-variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMap(pub Vec<usize>);

impl ColorMap {
    /// The coloring that lists k_1 ones, then k_2 twos, and so on.
    pub fn standard(k: &MultiDegree) -> Self {
        let mut v = Vec::new();
        for (i, &ki) in k.0.iter().enumerate() {
            v.extend(std::iter::repeat(i).take(ki));
        }
        ColorMap(v)
    }

    pub fn validate(&self, k: &MultiDegree) -> Result<(), LieError> {
        let r = k.r();
        let mut counts = vec![0usize; r];
        for (a, &c) in self.0.iter().enumerate() {
            if c >= r {
                return Err(LieError::ColorMap(format!("colorMap[{a}] = {c} is not a root index < {r}")));
            }
            counts[c] += 1;
        }
        if counts != k.0 {
            return Err(LieError::ColorMap(format!(
                "fiber sizes {counts:?} differ from multidegree {:?}",
                k.0
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn color(&self, a: usize) -> usize {
        self.0[a]
    }
}
