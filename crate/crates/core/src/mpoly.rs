//! Sparse polynomials in the three variables y, x, z (exponents stored in that order).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::rat::{fmt_rat, rat, Rat};

/// Exponent vector `[e_y, e_x, e_z]`.
pub type Monomial = [usize; 3];

pub const VARS: [&str; 3] = ["y", "x", "z"];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::term([0, 0, 0], c)
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The variable with index 0 (y), 1 (x) or 2 (z).
    pub fn var(i: usize) -> Self {
        let mut m = [0; 3];
        m[i] = 1;
        Self::term(m, rat(1))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.iter().sum::<usize>() == d)
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, s: &Rat) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term([m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]], c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> MPoly {
        (0..e).fold(MPoly::constant(rat(1)), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m[var] > 0 {
                let mut m2 = *m;
                m2[var] -= 1;
                out.add_term(m2, c * rat(m[var] as i64));
            }
        }
        out
    }

    /// Substitutes each variable by a polynomial.
    pub fn substitute(&self, images: &[MPoly; 3]) -> MPoly {
        let mut cache: [Vec<MPoly>; 3] = Default::default();
        let maxdeg = self.total_degree().unwrap_or(0);
        for (i, img) in images.iter().enumerate() {
            let mut pw = vec![MPoly::constant(rat(1))];
            for k in 1..=maxdeg {
                let next = pw[k - 1].mul(img);
                pw.push(next);
            }
            cache[i] = pw;
        }
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let t = cache[0][m[0]].mul(&cache[1][m[1]]).mul(&cache[2][m[2]]);
            out = out.add(&t.scale(c));
        }
        out
    }

    /// Homogenizes to degree `d` with z.
    pub fn homogenize(&self, d: usize) -> Option<MPoly> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let s = m[0] + m[1];
            if s > d || m[2] != 0 {
                return None;
            }
            out.add_term([m[0], m[1], d - s], c.clone());
        }
        Some(out)
    }

    pub fn eval(&self, pt: &[Rat; 3]) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (m, c)| {
            acc + c
                * num_traits::pow(pt[0].clone(), m[0])
                * num_traits::pow(pt[1].clone(), m[1])
                * num_traits::pow(pt[2].clone(), m[2])
        })
    }

    /// Sets z = 1.
    pub fn dehomogenize(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term([m[0], m[1], 0], c.clone());
        }
        out
    }

    /// Splits into (terms containing `var`, the rest).
    pub fn split_by(&self, var: usize) -> (MPoly, MPoly) {
        let mut with = MPoly::zero();
        let mut without = MPoly::zero();
        for (m, c) in &self.terms {
            if m[var] > 0 {
                with.add_term(*m, c.clone());
            } else {
                without.add_term(*m, c.clone());
            }
        }
        (with, without)
    }

    pub fn max_degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        // Highest total degree first, then by y, x, z exponents.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: usize = a.0.iter().sum();
            let db: usize = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (m, c) in terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let mono: Vec<String> = (0..3)
                .filter(|&i| m[i] > 0)
                .map(|i| {
                    if m[i] == 1 {
                        VARS[i].to_string()
                    } else {
                        format!("{}^{}", VARS[i], m[i])
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}
