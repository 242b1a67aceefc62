use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::poly::KappaPoly;
use super::{parse_rational, Rational, ScalarError};

/// Element of Q(κ), kept as num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KappaScalar {
    num: KappaPoly,
    den: KappaPoly,
}

impl Default for KappaScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl KappaScalar {
    pub fn zero() -> Self {
        KappaScalar { num: KappaPoly::zero(), den: KappaPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn kappa() -> Self {
        KappaScalar { num: KappaPoly::kappa(), den: KappaPoly::one() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(v.into()))
    }

    pub fn from_rational(r: Rational) -> Self {
        KappaScalar { num: KappaPoly::constant(r), den: KappaPoly::one() }
    }

    pub fn from_poly(p: KappaPoly) -> Self {
        KappaScalar { num: p, den: KappaPoly::one() }
    }

    /// Builds num/den and reduces. Panics if `den` is zero.
    pub fn from_parts(num: KappaPoly, den: KappaPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in KappaScalar");
        Self::reduce(num, den)
    }

    fn reduce(num: KappaPoly, den: KappaPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.degree() == Some(0) {
            let inv = Rational::one() / den.leading().unwrap();
            return KappaScalar { num: num.scale(&inv), den: KappaPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lead = Rational::one() / den.leading().unwrap();
        KappaScalar { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn numer(&self) -> &KappaPoly {
        &self.num
    }

    pub fn denom(&self) -> &KappaPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational value when the scalar does not depend on κ.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Value at κ = κ₀, or `None` at a pole.
    pub fn eval(&self, k0: &Rational) -> Option<Rational> {
        let d = self.den.eval(k0);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(k0) / d)
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::reduce(self.den.clone(), self.num.clone()))
        }
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        KappaScalar { num: self.num.scale(c), den: self.den.clone() }
    }

    fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return KappaScalar { num: self.num.add(&o.num), den: KappaPoly::one() };
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::reduce(num, self.den.mul(&o.den))
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return KappaScalar { num: self.num.mul(&o.num), den: KappaPoly::one() };
        }
        if let Some(c) = o.as_rational() {
            return self.scale_rational(&c);
        }
        if let Some(c) = self.as_rational() {
            return o.scale_rational(&c);
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn neg_ref(&self) -> Self {
        KappaScalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl From<Rational> for KappaScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for KappaScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a KappaScalar> for &'a KappaScalar {
            type Output = KappaScalar;
            fn $m(self, o: &'a KappaScalar) -> KappaScalar {
                $body(self, o)
            }
        }
        impl $tr<KappaScalar> for KappaScalar {
            type Output = KappaScalar;
            fn $m(self, o: KappaScalar) -> KappaScalar {
                $body(&self, &o)
            }
        }
        impl<'a> $tr<&'a KappaScalar> for KappaScalar {
            type Output = KappaScalar;
            fn $m(self, o: &'a KappaScalar) -> KappaScalar {
                $body(&self, o)
            }
        }
    };
}

binop!(Add, add, |a: &KappaScalar, b: &KappaScalar| a.add_ref(b));
binop!(Sub, sub, |a: &KappaScalar, b: &KappaScalar| a.add_ref(&b.neg_ref()));
binop!(Mul, mul, |a: &KappaScalar, b: &KappaScalar| a.mul_ref(b));
binop!(Div, div, |a: &KappaScalar, b: &KappaScalar| a
    .mul_ref(&b.inv().expect("division by zero in Q(k)")));

impl Neg for KappaScalar {
    type Output = KappaScalar;
    fn neg(self) -> KappaScalar {
        self.neg_ref()
    }
}

impl Neg for &KappaScalar {
    type Output = KappaScalar;
    fn neg(self) -> KappaScalar {
        self.neg_ref()
    }
}

impl AddAssign<&KappaScalar> for KappaScalar {
    fn add_assign(&mut self, o: &KappaScalar) {
        *self = self.add_ref(o);
    }
}

impl AddAssign for KappaScalar {
    fn add_assign(&mut self, o: KappaScalar) {
        *self = self.add_ref(&o);
    }
}

impl SubAssign<&KappaScalar> for KappaScalar {
    fn sub_assign(&mut self, o: &KappaScalar) {
        *self = self.add_ref(&o.neg_ref());
    }
}

impl fmt::Display for KappaScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &KappaPoly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Parses a polynomial like `2*k^2 - 1/3*k + 5`.
fn parse_poly(s: &str) -> Result<KappaPoly, ScalarError> {
    let bad = || ScalarError::Parse(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc = KappaPoly::zero();
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (coef, power) = match body.find('k') {
            None => (parse_rational(body).map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let head = &body[..pos];
                let tail = &body[pos + 1..];
                let coef = match head.strip_suffix('*') {
                    Some(h) => parse_rational(h).map_err(|_| bad())?,
                    None if head.is_empty() => Rational::one(),
                    None => return Err(bad()),
                };
                let power = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(bad)?
                };
                (coef, power)
            }
        };
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = if neg { -coef } else { coef };
        acc = acc.add(&KappaPoly::from_coeffs(coeffs));
    }
    Ok(acc)
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t)
}

impl FromStr for KappaScalar {
    type Err = ScalarError;

    /// Accepts the `Display` output: `p/q`, polynomials in `k`, and
    /// `(num)/(den)` quotients.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    let (l, r) = (&s[..i], &s[i + 1..]);
                    let r = r.trim_start();
                    if l.trim_end().ends_with(')') || r.starts_with('(') || r.starts_with('k') {
                        split = Some(i);
                    }
                }
                _ => {}
            }
        }
        match split {
            Some(i) => {
                let num = parse_poly(strip_parens(&s[..i]))?;
                let den = parse_poly(strip_parens(&s[i + 1..]))?;
                if den.is_zero() {
                    return Err(ScalarError::Parse(s.to_string()));
                }
                Ok(Self::from_parts(num, den))
            }
            None => Ok(Self::from_poly(parse_poly(strip_parens(s))?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> KappaScalar {
        KappaScalar::kappa()
    }

    #[test]
    fn cancellation_reduces() {
        let one = KappaScalar::one();
        let x = (&k() * &k() - &one) / (&k() - &one);
        assert_eq!(x, &k() + &one);
        assert!(x.is_polynomial());
    }

    #[test]
    fn inverse_times_self() {
        let x = (&k() + &KappaScalar::from_int(3)) / (&k() * &k());
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let x = (&k() * &k() + &KappaScalar::one()) / (&k() - &KappaScalar::from_int(2));
        let s = x.to_string();
        assert_eq!(s, "(k^2 + 1)/(k - 2)");
        assert_eq!(s.parse::<KappaScalar>().unwrap(), x);
        assert_eq!("-k".parse::<KappaScalar>().unwrap(), -k());
        assert_eq!("3/2".parse::<KappaScalar>().unwrap().to_string(), "3/2");
        assert_eq!("1/k".parse::<KappaScalar>().unwrap(), k().inv().unwrap());
    }

    #[test]
    fn pole_detection() {
        let x = KappaScalar::one() / (&k() - &KappaScalar::from_int(2));
        assert!(x.eval(&Rational::from_integer(2.into())).is_none());
    }
}
