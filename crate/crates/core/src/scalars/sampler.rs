use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Rational, ScalarError};

const MAX_ATTEMPTS: usize = 1000;

/// Rational coordinates (z_1..z_n, t_1..t_N) of a point of U_{n,N}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub z: Vec<Rational>,
    pub t: Vec<Rational>,
}

impl SamplePoint {
    /// True if no hyperplane z_i = z_j, t_a = z_i, t_a = t_b contains the point.
    pub fn is_generic(&self) -> bool {
        let all: Vec<&Rational> = self.z.iter().chain(&self.t).collect();
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                if all[i] == all[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// Reproducible stream of random rationals p/q with |p| ≤ bound, 1 ≤ q ≤ bound.
#[derive(Clone, Debug)]
pub struct SeededSampler {
    seed: u64,
    bound: u64,
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub const DEFAULT_BOUND: u64 = 97;

    pub fn new(seed: u64) -> Self {
        Self::with_bound(seed, Self::DEFAULT_BOUND)
    }

    pub fn with_bound(seed: u64, bound: u64) -> Self {
        SeededSampler { seed, bound: bound.max(1), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Independent sampler for worker `index`, derived from the seed only.
    pub fn child(&self, index: u64) -> Self {
        let mut x = self.seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        // splitmix64 finalizer
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^= x >> 31;
        Self::with_bound(x, self.bound)
    }

    pub fn rational(&mut self) -> Rational {
        let b = self.bound as i64;
        let p: i64 = self.rng.gen_range(-b..=b);
        let q: i64 = self.rng.gen_range(1..=b);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != Rational::from_integer(0.into()) {
                return r;
            }
        }
    }

    pub fn rationals(&mut self, count: usize) -> Vec<Rational> {
        (0..count).map(|_| self.rational()).collect()
    }

    /// A point of U_{n,N} by rejection sampling.
    pub fn sample_point(&mut self, n: usize, big_n: usize) -> Result<SamplePoint, ScalarError> {
        for _ in 0..MAX_ATTEMPTS {
            let p = SamplePoint { z: self.rationals(n), t: self.rationals(big_n) };
            if p.is_generic() {
                return Ok(p);
            }
        }
        Err(ScalarError::SamplerExhausted { attempts: MAX_ATTEMPTS, bound: self.bound })
    }

    /// A point of the fiber over fixed, pairwise distinct `z`.
    pub fn sample_fiber_point(&mut self, z: &[Rational], big_n: usize) -> Result<SamplePoint, ScalarError> {
        for _ in 0..MAX_ATTEMPTS {
            let p = SamplePoint { z: z.to_vec(), t: self.rationals(big_n) };
            if p.is_generic() {
                return Ok(p);
            }
        }
        Err(ScalarError::SamplerExhausted { attempts: MAX_ATTEMPTS, bound: self.bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_point() {
        let a = SeededSampler::new(11).sample_point(2, 3).unwrap();
        let b = SeededSampler::new(11).sample_point(2, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.is_generic());
    }

    #[test]
    fn exhaustion_is_reported() {
        let mut s = SeededSampler::with_bound(1, 1);
        // only {-1, 0, 1} available: 4 distinct coordinates impossible
        assert!(matches!(s.sample_point(2, 2), Err(ScalarError::SamplerExhausted { .. })));
    }

    #[test]
    fn children_differ() {
        let s = SeededSampler::new(5);
        let mut a = s.child(0);
        let mut b = s.child(1);
        assert_ne!(a.rationals(4), b.rationals(4));
    }
}
