//! Weighted-projective invariants of nonspecial Picard curves, isomorphism tests over ℚ and ℚ̄,
//! automorphism types and twists with prescribed bad primes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::factor::{factor_rat, DEFAULT_TRIAL_BOUND};
use crate::arith::rat::{fmt_rat, pow_i, rat, vp, Rat};
use crate::arith::sunit::s_unit_classes;
use crate::binary_forms::{disc_binary, equivalences, fourth_power_class, BinaryQuartic};
use crate::error::{PicardError, Result};
use crate::models::{tschirnhausen_normal_form, CurveKind, NonspecialShort, PicardCurve, PicardModel, SpecialShort};
use crate::reduction::bad_primes;

const WEIGHTS: [i64; 3] = [6, 9, 12];

/// `(c₂ : c₃ : c₄)` in P(6 : 9 : 12); ν acts by `(ν⁻⁶c₂, ν⁻⁹c₃, ν⁻¹²c₄)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedPoint {
    pub c: [Rat; 3],
}

impl WeightedPoint {
    pub fn new(c2: Rat, c3: Rat, c4: Rat) -> Self {
        Self { c: [c2, c3, c4] }
    }

    pub fn act(&self, nu: &Rat) -> Self {
        Self {
            c: std::array::from_fn(|i| &self.c[i] * pow_i(nu, -WEIGHTS[i])),
        }
    }

    /// The special class: `c₂ = c₃ = 0`.
    pub fn is_special(&self) -> bool {
        self.c[0].is_zero() && self.c[1].is_zero()
    }

    /// `y³ = x⁴ + c₂x² + c₃x + c₄`.
    pub fn model(&self) -> Result<NonspecialShort> {
        let [c2, c3, c4] = self.c.clone();
        NonspecialShort::new(rat(1), BinaryQuartic::new([rat(1), rat(0), c2, c3, c4])?)
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", fmt_rat(&self.c[0]), fmt_rat(&self.c[1]), fmt_rat(&self.c[2]))
    }
}

/// Canonical representative of a weighted point, and ν with `output = ν·input`.
///
/// Each prime is divided out as far as the weights allow (which also clears denominators), then
/// ν = −1 makes `c₃ ≥ 0`. Special points map to the marker `(0 : 0 : 1)`.
pub fn normalize_weighted_point(c2: &Rat, c3: &Rat, c4: &Rat) -> Result<(WeightedPoint, Rat)> {
    let p = WeightedPoint::new(c2.clone(), c3.clone(), c4.clone());
    let f = BinaryQuartic::new([rat(1), rat(0), c2.clone(), c3.clone(), c4.clone()])?;
    if disc_binary(&f).is_zero() {
        return Err(PicardError::Degenerate(format!("{p} has a singular quartic")));
    }
    if p.is_special() {
        // ν = c₄^(1/12) need not be rational; only the marker is canonical.
        return Ok((WeightedPoint::new(rat(0), rat(0), rat(1)), rat(1)));
    }
    let mut primes: Vec<BigInt> = Vec::new();
    for c in p.c.iter().filter(|c| !c.is_zero()) {
        let (_, fs, unf) = factor_rat(c, DEFAULT_TRIAL_BOUND);
        if !unf.to_u64().is_some_and(|u| u == 1) {
            return Err(PicardError::Computation(format!("cannot factor {}", fmt_rat(c))));
        }
        primes.extend(fs.into_iter().map(|(q, _)| q));
    }
    primes.sort();
    primes.dedup();
    let mut nu = rat(1);
    for q in primes {
        let q64 = q.to_u64().ok_or_else(|| PicardError::Computation("prime too large".into()))?;
        let e = (0..3)
            .filter(|&i| !p.c[i].is_zero())
            .map(|i| vp(&p.c[i], q64).div_euclid(WEIGHTS[i]))
            .min()
            .expect("some coordinate is nonzero");
        nu *= pow_i(&Rat::from_integer(q), e);
    }
    let mut out = p.act(&nu);
    if out.c[1].is_negative() {
        nu = -nu;
        out = p.act(&nu);
    }
    Ok((out, nu))
}

/// Weighted point of a nonspecial-shaped model.
pub fn weighted_point(m: &NonspecialShort) -> WeightedPoint {
    let (c2, c3, c4) = tschirnhausen_normal_form(m);
    WeightedPoint::new(c2, c3, c4)
}

pub fn normalized_point(m: &NonspecialShort) -> Result<WeightedPoint> {
    let w = weighted_point(m);
    Ok(normalize_weighted_point(&w.c[0], &w.c[1], &w.c[2])?.0)
}

/// ℚ̄-class as a branch tuple of absolute invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QbarClass(pub [Rat; 3]);

impl QbarClass {
    pub fn of(w: &WeightedPoint) -> Self {
        let [c2, c3, c4] = &w.c;
        QbarClass(if !c2.is_zero() {
            [rat(1), c3 * c3 / pow_i(c2, 3), c4 / (c2 * c2)]
        } else if !c3.is_zero() {
            [rat(0), rat(1), pow_i(c4, 3) / pow_i(c3, 4)]
        } else {
            [rat(0), rat(0), rat(1)]
        })
    }

    pub fn is_special(&self) -> bool {
        self.0[0].is_zero() && self.0[1].is_zero()
    }
}

impl fmt::Display for QbarClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", fmt_rat(&self.0[0]), fmt_rat(&self.0[1]), fmt_rat(&self.0[2]))
    }
}

pub fn qbar_class(m: &NonspecialShort) -> QbarClass {
    QbarClass::of(&weighted_point(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutType {
    Z3,
    Z6,
    Z9,
}

impl AutType {
    /// Exponent n with twists parametrized by ℚ^×/(ℚ^×)ⁿ.
    pub fn order(self) -> u32 {
        match self {
            AutType::Z3 => 3,
            AutType::Z6 => 6,
            AutType::Z9 => 9,
        }
    }
}

impl fmt::Display for AutType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}", self.order())
    }
}

fn require_nonspecial(w: &WeightedPoint) -> Result<()> {
    if w.is_special() {
        Err(PicardError::Precondition("special curve; use the special isomorphism test".into()))
    } else {
        Ok(())
    }
}

pub fn automorphism_type(m: &NonspecialShort) -> Result<AutType> {
    let w = weighted_point(m);
    require_nonspecial(&w)?;
    let [c2, c3, c4] = &w.c;
    Ok(if c2.is_zero() && c4.is_zero() {
        AutType::Z9
    } else if c3.is_zero() {
        AutType::Z6
    } else {
        AutType::Z3
    })
}

/// ℚ-isomorphism of nonspecial curves, with ν mapping the weighted point of `m1` to that of `m2`.
pub fn is_isomorphic_q(m1: &NonspecialShort, m2: &NonspecialShort) -> Result<Option<Rat>> {
    let (w1, w2) = (weighted_point(m1), weighted_point(m2));
    require_nonspecial(&w1)?;
    require_nonspecial(&w2)?;
    let (n1, nu1) = normalize_weighted_point(&w1.c[0], &w1.c[1], &w1.c[2])?;
    let (n2, nu2) = normalize_weighted_point(&w2.c[0], &w2.c[1], &w2.c[2])?;
    Ok((n1 == n2).then(|| nu1 / nu2))
}

pub fn is_isomorphic_qbar(m1: &NonspecialShort, m2: &NonspecialShort) -> bool {
    qbar_class(m1) == qbar_class(m2)
}

/// ℚ-isomorphism of `b₁x⁴ = f₁(y)` and `b₂x⁴ = f₂(y)`: some `f₂∘A = μ·f₁` with
/// `μ·b₁/b₂` a fourth power.
pub fn is_isomorphic_special(m1: &SpecialShort, m2: &SpecialShort) -> bool {
    equivalences(&m1.f, &m2.f)
        .iter()
        .any(|(_, mu)| fourth_power_class(&(mu * &m1.b / &m2.b)) == rat(1))
}

/// The special model `x⁴ = f(y)` of a special curve in either shape.
pub fn special_model(c: &PicardCurve) -> Option<SpecialShort> {
    if c.kind != CurveKind::Special {
        return None;
    }
    if let Some(m) = c.model.special_short() {
        return Some(m);
    }
    // y³ = x⁴ + c₄ is x⁴ = y³ − c₄ with the roles of x and y exchanged.
    let (_, _, c4) = tschirnhausen_normal_form(&c.model.nonspecial_short()?);
    SpecialShort::new(rat(1), BinaryQuartic::new([rat(0), rat(1), rat(0), rat(0), -c4]).ok()?).ok()
}

pub fn is_special(c: &PicardCurve) -> bool {
    c.kind == CurveKind::Special
}

/// `Y_λ` for the automorphism type of `m`.
pub fn twist(m: &NonspecialShort, lambda: &Rat) -> Result<NonspecialShort> {
    let w = weighted_point(m);
    let [c2, c3, c4] = &w.c;
    let t = match automorphism_type(m)? {
        AutType::Z3 => [c2 * pow_i(lambda, 2), c3 * pow_i(lambda, 3), c4 * pow_i(lambda, 4)],
        AutType::Z6 => [c2 * lambda, rat(0), c4 * lambda * lambda],
        AutType::Z9 => [rat(0), c3 * lambda, rat(0)],
    };
    WeightedPoint { c: t }.model()
}

/// Twists `Y_λ` with every bad prime in `S`, one per ℚ-class, sorted by normalized point.
pub fn twists_with_good_reduction_outside(m: &NonspecialShort, s: &[u64]) -> Result<Vec<NonspecialShort>> {
    if !s.contains(&3) {
        return Err(PicardError::Precondition("S must contain 3".into()));
    }
    let aut = automorphism_type(m)?;
    // A twist ramified at a good prime acts on inertia through a nontrivial automorphism and
    // is bad there, so λ only needs support in S and the bad primes of m.
    let base = PicardCurve::new(PicardModel::NonspecialShort(m.clone()))?;
    let mut primes: Vec<u64> = s.to_vec();
    primes.extend(bad_primes(&base)?);
    primes.sort_unstable();
    primes.dedup();
    let classes = s_unit_classes(&primes, aut.order());
    let candidates: Vec<(WeightedPoint, NonspecialShort)> = classes
        .representatives
        .par_iter()
        .map(|lambda| -> Result<Option<(WeightedPoint, NonspecialShort)>> {
            let t = twist(m, lambda)?;
            let curve = PicardCurve::new(PicardModel::NonspecialShort(t.clone()))?;
            let bad = bad_primes(&curve)?;
            if bad.iter().all(|p| s.contains(p)) {
                Ok(Some((normalized_point(&t)?, t)))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut out: Vec<(WeightedPoint, NonspecialShort)> = Vec::new();
    for (key, t) in candidates {
        if !out.iter().any(|(k, _)| *k == key) {
            out.push((key, t));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, t)| t).collect())
}
