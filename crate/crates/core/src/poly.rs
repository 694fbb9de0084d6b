//! Dense univariate polynomials over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::primes_up_to;
use crate::arith::finite_field::{roots_mod_p, squarefree_mod_p};
use crate::arith::rat::{common_denominator, content_of_integers, fmt_rat, from_int, rat, Rat};

/// Polynomial with rational coefficients, stored low degree first without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x - a`.
    pub fn linear_root(a: &Rat) -> Self {
        Self::new(vec![-a.clone(), rat(1)])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::constant(rat(1));
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &QPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(QPoly::zero(), |acc, c| &(&acc * g) + &QPoly::constant(c.clone()))
    }

    /// `self(x + a)`.
    pub fn shift(&self, a: &Rat) -> Self {
        self.compose(&QPoly::new(vec![a.clone(), rat(1)]))
    }

    /// `self(αx + β)`.
    pub fn affine(&self, alpha: &Rat, beta: &Rat) -> Self {
        self.compose(&QPoly::new(vec![beta.clone(), alpha.clone()]))
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Resultant by the Euclidean algorithm.
    pub fn resultant(&self, other: &QPoly) -> Rat {
        if self.is_zero() || other.is_zero() {
            return Rat::zero();
        }
        let n = self.coeffs.len() - 1;
        let m = other.coeffs.len() - 1;
        if m == 0 {
            return num_traits::pow(other.lc(), n);
        }
        if n == 0 {
            return num_traits::pow(self.lc(), m);
        }
        let r = self.div_rem(other).1;
        if r.is_zero() {
            return Rat::zero();
        }
        let dr = r.coeffs.len() - 1;
        let sign = if (n * m) % 2 == 1 { -rat(1) } else { rat(1) };
        sign * num_traits::pow(other.lc(), n - dr) * other.resultant(&r)
    }

    /// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Rat {
        let n = self.degree().expect("discriminant of zero polynomial");
        if n == 0 {
            return rat(1);
        }
        let r = self.resultant(&self.derivative()) / self.lc();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Primitive integer polynomial proportional to `self` with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * from_int(&den)).to_integer())
            .collect();
        let mut g = content_of_integers(&ints);
        if g.is_zero() {
            return ints;
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn from_bigints(c: &[BigInt]) -> QPoly {
        QPoly::new(c.iter().map(from_int).collect())
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut g = self.squarefree_part();
        let mut roots = Vec::new();
        if g.coeff(0).is_zero() {
            roots.push(Rat::zero());
            g = g.div_rem(&QPoly::x()).0;
        }
        if g.degree().unwrap_or(0) >= 1 {
            roots.extend(integer_poly_rational_roots(&g.primitive_integer()));
        }
        roots.sort();
        roots
    }
}

/// Rational roots of a squarefree integer polynomial with nonzero constant term,
/// found by lifting roots modulo a good prime and reconstructing `lc·root`.
fn integer_poly_rational_roots(a: &[BigInt]) -> Vec<Rat> {
    let lc = a.last().unwrap().clone();
    let a0 = a[0].clone();
    let mut p_opt = None;
    for p in primes_up_to(200_000).into_iter().skip(1) {
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() || (&a0 % &pb).is_zero() {
            continue;
        }
        if squarefree_mod_p(a, p) {
            p_opt = Some(p);
            break;
        }
    }
    let Some(p) = p_opt else {
        return Vec::new();
    };
    let poly = QPoly::from_bigints(a);
    // |lc·root| ≤ |lc| + max|a_i|.
    let bound: BigInt = lc.abs() + a.iter().map(|c| c.abs()).max().unwrap();
    let pb = BigInt::from(p);
    let target = bound * 2u32 + 1u32;
    let mut out = Vec::new();
    for r0 in roots_mod_p(a, p) {
        let mut r = BigInt::from(r0);
        let mut modulus = pb.clone();
        while modulus <= target {
            modulus = &modulus * &modulus;
            r = hensel_step(a, &r, &modulus);
        }
        let w = (&lc * &r).mod_floor(&modulus);
        let w = if &w * 2u32 > modulus { w - &modulus } else { w };
        let cand = Rat::new(w, lc.clone());
        if poly.eval(&cand).is_zero() {
            out.push(cand);
        }
    }
    out
}

fn eval_int(a: &[BigInt], x: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// One Newton step `r ← r − f(r)/f'(r)` modulo `m`.
fn hensel_step(a: &[BigInt], r: &BigInt, m: &BigInt) -> BigInt {
    let da: Vec<BigInt> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let fr = eval_int(a, r).mod_floor(m);
    let dfr = eval_int(&da, r).mod_floor(m);
    let inv = dfr.modinv(m).expect("simple root mod p lifts");
    (r - fr * inv).mod_floor(m)
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl QPoly {
    /// Renders with the given variable name, highest degree first, e.g. `x^4 - 6*x^2 - 3`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&fmt_rat(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", fmt_rat(&a), mono));
            }
        }
        s
    }

    /// Small integer degree helper for callers that know the polynomial is nonzero.
    pub fn deg(&self) -> usize {
        self.degree().expect("zero polynomial has no degree")
    }

    pub fn coeff_i64(&self, i: usize) -> Option<i64> {
        let c = self.coeff(i);
        if c.is_integer() {
            c.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}
