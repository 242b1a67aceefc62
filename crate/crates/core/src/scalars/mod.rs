//! Exact arithmetic over Q and Q(κ), dense exact linear algebra, and seeded
//! generic-point sampling.

mod kappa;
mod matrix;
mod poly;
mod sampler;

pub use kappa::KappaScalar;
pub use matrix::ExactMatrix;
pub use poly::KappaPoly;
pub use sampler::{SamplePoint, SeededSampler};

use num_bigint::BigInt;
use thiserror::Error;

/// Arbitrary-precision rational; num keeps it reduced with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot parse `{0}` as an exact scalar")]
    Parse(String),
    #[error("rejection sampling failed {attempts} times (bound {bound}); raise the bound or reseed")]
    SamplerExhausted { attempts: usize, bound: u64 },
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p` or `p/q` with decimal integers.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| err())?;
    let q: BigInt = q.parse().map_err(|_| err())?;
    if q == BigInt::from(0) {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

/// `p/q` or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
