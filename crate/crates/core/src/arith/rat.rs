//! Rational scalars and p-adic valuations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number. Always stored in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn is_integral(q: &Rat) -> bool {
    q.denom().is_one()
}

/// `base^exp` for a possibly negative exponent.
pub fn pow_i(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn prime_pow(p: u64, exp: i64) -> Rat {
    pow_i(&rat(p as i64), exp)
}

/// Formats as `num` or `num/den`.
pub fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `num` or `num/den` with optional sign.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// A p-adic valuation value: an integer or `+∞` (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// The finite value; panics on `+∞`.
    pub fn unwrap(self) -> i64 {
        self.finite().expect("valuation of zero")
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The p-adic valuation of a rational number.
pub fn valuation(q: &Rat, p: u64) -> Valuation {
    if q.is_zero() {
        Valuation::Infinity
    } else {
        Valuation::Finite(vp_int(q.numer(), p) - vp_int(q.denom(), p))
    }
}

/// Finite valuation, with zero mapped to `i64::MAX / 4` so sums stay in range.
pub fn vp(q: &Rat, p: u64) -> i64 {
    valuation(q, p).finite().unwrap_or(i64::MAX / 4)
}

/// Minimum valuation over a list of coefficients (Gauss valuation).
pub fn gauss_valuation<'a>(coeffs: impl IntoIterator<Item = &'a Rat>, p: u64) -> Valuation {
    coeffs
        .into_iter()
        .map(|c| valuation(c, p))
        .min()
        .unwrap_or(Valuation::Infinity)
}

/// Integer part of a small rational, for exponent bookkeeping.
pub fn to_i64(q: &Rat) -> Option<i64> {
    if q.denom().is_one() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// `⌊a/b⌋` for integers with `b > 0`.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// `⌈a/b⌉` for integers with `b > 0`.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(coeffs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    coeffs
        .into_iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Gcd of the numerators of integral values.
pub fn content_of_integers<'a>(coeffs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    coeffs.into_iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}
