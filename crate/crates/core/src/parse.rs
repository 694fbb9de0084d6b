//! Parsing polynomial and curve literals such as `y^3 = 7*(x^4 - 9*x^2 - 10*x - 9)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::rat::Rat;
use crate::error::{PicardError, Result};
use crate::mpoly::MPoly;
use crate::poly::QPoly;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, msg: &str) -> PicardError {
        PicardError::Parse(format!("{msg} in {:?} at position {}", self.src, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = if self.eat('-') {
            self.term()?.scale(&Rat::from_integer((-1).into()))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                if d.total_degree() != Some(0) {
                    return Err(self.err("division by a non-constant"));
                }
                let c = d.coeff(&[0, 0, 0]);
                acc = acc.scale(&c.recip());
            } else if matches!(self.peek(), Some('(') | Some('x') | Some('y') | Some('z')) {
                // Implicit multiplication, e.g. `2x` or `3(x+1)`.
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.integer()?;
            let e = e
                .to_usize()
                .filter(|&e| e <= 64)
                .ok_or_else(|| self.err("exponent out of range"))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some('y') => {
                self.pos += 1;
                Ok(MPoly::var(0))
            }
            Some('x') => {
                self.pos += 1;
                Ok(MPoly::var(1))
            }
            Some('z') => {
                self.pos += 1;
                Ok(MPoly::var(2))
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.power()?.scale(&Rat::from_integer((-1).into())))
            }
            Some(c) if c.is_ascii_digit() => Ok(MPoly::constant(Rat::from_integer(self.integer()?))),
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parses a polynomial expression in x, y, z.
pub fn parse_mpoly(s: &str) -> Result<MPoly> {
    let mut p = Parser::new(s);
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses `lhs = rhs` (or a single expression) as the polynomial `lhs − rhs`.
pub fn parse_equation(s: &str) -> Result<MPoly> {
    match s.split_once('=') {
        Some((l, r)) => Ok(parse_mpoly(l)?.sub(&parse_mpoly(r)?)),
        None => parse_mpoly(s),
    }
}

/// Parses a univariate polynomial literal; any single variable name is accepted.
pub fn parse_univariate(s: &str) -> Result<QPoly> {
    let p = parse_mpoly(s)?;
    let used: Vec<usize> = (0..3).filter(|&i| p.max_degree_in(i) > 0).collect();
    if used.len() > 1 {
        return Err(PicardError::Parse(format!("{s:?} is not univariate")));
    }
    let v = used.first().copied().unwrap_or(1);
    let deg = p.max_degree_in(v);
    let mut coeffs = vec![Rat::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m[v]] = c.clone();
    }
    Ok(QPoly::new(coeffs))
}
