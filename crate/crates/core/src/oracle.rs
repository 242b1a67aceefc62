//! Brute-force cross-checks that share no code with the main routes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::liealg::{words_of_degree, MultiDegree, Word};
use crate::scalars::Rational;

type Poly = BTreeMap<Word, Rational>;

/// [x_{i1}, [x_{i2}, […, x_{im}]]] expanded in the free associative algebra.
fn right_normed(w: &[usize]) -> Poly {
    let mut cur: Poly = BTreeMap::new();
    cur.insert(vec![w[w.len() - 1]], Rational::one());
    for &letter in w[..w.len() - 1].iter().rev() {
        let mut next: Poly = BTreeMap::new();
        for (m, c) in &cur {
            let mut left = vec![letter];
            left.extend_from_slice(m);
            *next.entry(left).or_insert_with(Rational::zero) += c;
            let mut right = m.clone();
            right.push(letter);
            *next.entry(right).or_insert_with(Rational::zero) -= c;
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur
}

/// Rank by plain Gaussian elimination over Q on sparse rows.
fn sparse_rank(mut rows: Vec<Poly>) -> usize {
    let mut pivots: Vec<(Word, Poly)> = Vec::new();
    for row in rows.iter_mut() {
        for (lead, p) in &pivots {
            if let Some(c) = row.get(lead).cloned() {
                for (m, v) in p {
                    let e = row.entry(m.clone()).or_insert_with(Rational::zero);
                    *e -= &c * v;
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
        if let Some((lead, c)) = row.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
            let normalized: Poly = row.iter().map(|(m, v)| (m.clone(), v / &c)).collect();
            // keep earlier pivots reduced against the new one
            for (_, p) in pivots.iter_mut() {
                if let Some(d) = p.get(&lead).cloned() {
                    for (m, v) in &normalized {
                        let e = p.entry(m.clone()).or_insert_with(Rational::zero);
                        *e -= &d * v;
                    }
                    p.retain(|_, v| !v.is_zero());
                }
            }
            pivots.push((lead, normalized));
        }
    }
    pivots.len()
}

/// dim n_k as the span of all right-normed brackets of multidegree k.
pub fn free_lie_dim_brute_force(k: &MultiDegree) -> usize {
    if k.total() == 0 {
        return 0;
    }
    sparse_rank(words_of_degree(k).iter().map(|w| right_normed(w)).collect())
}

/// Coefficients of Π_{j<N} (1 + (n + j) t): the Betti numbers of the fiber
/// of U_{n,N} → U_n.
pub fn fiber_poincare(n: usize, big_n: usize) -> Vec<usize> {
    let mut c = vec![1usize];
    for j in 0..big_n {
        let r = n + j;
        let mut next = vec![0; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] += r * x;
        }
        c = next;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_free_lie_dims() {
        assert_eq!(free_lie_dim_brute_force(&MultiDegree(vec![2, 1])), 1);
        assert_eq!(free_lie_dim_brute_force(&MultiDegree(vec![2, 2])), 1);
        assert_eq!(free_lie_dim_brute_force(&MultiDegree(vec![3, 2])), 2);
        assert_eq!(free_lie_dim_brute_force(&MultiDegree(vec![2])), 0);
    }

    #[test]
    fn poincare_of_one_fiber_point() {
        assert_eq!(fiber_poincare(2, 1), vec![1, 2]);
        assert_eq!(fiber_poincare(3, 2), vec![1, 7, 12]);
    }
}
