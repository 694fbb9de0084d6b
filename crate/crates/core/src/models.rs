//! Picard-curve models: short and long Weierstrass shapes, conversions between them,
//! point/tangent normalization, the Tschirnhausen normal form and discriminant minimization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::factor::{factor_int, DEFAULT_TRIAL_BOUND};
use crate::arith::rat::{from_int, pow_i, prime_pow, rat, vp, Rat};
use crate::binary_forms::{disc_binary, invariant_i, BinaryQuartic};
use crate::error::{PicardError, Result};
use crate::mpoly::{MPoly, Monomial};
use crate::poly::QPoly;
use crate::ternary_forms::{
    disc_short_nonspecial, disc_short_special, disc_ternary, LinearChange3, TernaryQuartic, X, Y, Z,
};

/// Coefficients of a binary form of degree `len − 1`, highest power of the first variable first.
pub type BinForm = Vec<Rat>;

fn form_mul(a: &[Rat], b: &[Rat]) -> BinForm {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn form_scale(a: &[Rat], s: &Rat) -> BinForm {
    a.iter().map(|c| c * s).collect()
}

/// `b·y³ = f(x)`, as the form `b·y³z − f(x, z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NonspecialShort {
    pub b: Rat,
    pub f: BinaryQuartic,
}

impl NonspecialShort {
    pub fn new(b: Rat, f: BinaryQuartic) -> Result<Self> {
        if b.is_zero() {
            return Err(PicardError::Degenerate("b = 0".into()));
        }
        if f.c[0].is_zero() {
            return Err(PicardError::Degenerate("x⁴ coefficient vanishes".into()));
        }
        if disc_binary(&f).is_zero() {
            return Err(PicardError::Degenerate("branch quartic is not separable".into()));
        }
        Ok(Self { b, f })
    }

    pub fn from_ints(b: i64, c: [i64; 5]) -> Result<Self> {
        Self::new(rat(b), BinaryQuartic::from_ints(c))
    }

    pub fn to_form(&self) -> TernaryQuartic {
        let mut p = MPoly::term([3, 0, 1], self.b.clone());
        for (i, c) in self.f.c.iter().enumerate() {
            p.add_term([0, 4 - i, i], -c.clone());
        }
        TernaryQuartic::new(p).expect("b ≠ 0")
    }

    pub fn from_form(f: &TernaryQuartic) -> Option<Self> {
        if !f.poly().terms().all(|(m, _)| *m == [3, 0, 1] || m[0] == 0) {
            return None;
        }
        let c = std::array::from_fn(|i| -f.coeff(0, 4 - i, i));
        Self::new(f.coeff(3, 0, 1), BinaryQuartic::new(c).ok()?).ok()
    }

    pub fn disc(&self) -> Rat {
        disc_short_nonspecial(&self.b, &self.f).expect("validated at construction")
    }

    pub fn to_long(&self) -> NonspecialLong {
        NonspecialLong {
            a0: self.b.clone(),
            a1: vec![Rat::zero(); 2],
            a2: vec![Rat::zero(); 3],
            a4: self.f.clone(),
        }
    }
}

/// `(a₀y³ + a₁y² + a₂y)z = a₄(x, z)` with `aᵢ` forms in (x, z) and `a₁² = 3a₀a₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NonspecialLong {
    pub a0: Rat,
    pub a1: BinForm,
    pub a2: BinForm,
    pub a4: BinaryQuartic,
}

impl NonspecialLong {
    pub fn new(a0: Rat, a1: BinForm, a2: BinForm, a4: BinaryQuartic) -> Result<Self> {
        if a0.is_zero() || a1.len() != 2 || a2.len() != 3 {
            return Err(PicardError::Degenerate("malformed long model".into()));
        }
        if form_mul(&a1, &a1) != form_scale(&a2, &(rat(3) * &a0)) {
            return Err(PicardError::Precondition("a₁² = 3a₀a₂ fails".into()));
        }
        let m = Self { a0, a1, a2, a4 };
        long_to_short_nonspecial(&m)?;
        Ok(m)
    }

    pub fn to_form(&self) -> TernaryQuartic {
        let mut p = MPoly::term([3, 0, 1], self.a0.clone());
        for (k, a) in [(1usize, &self.a1), (2, &self.a2)] {
            for (i, c) in a.iter().enumerate() {
                p.add_term([3 - k, k - i, i + 1], c.clone());
            }
        }
        for (i, c) in self.a4.c.iter().enumerate() {
            p.add_term([0, 4 - i, i], -c.clone());
        }
        TernaryQuartic::new(p).expect("a₀ ≠ 0")
    }

    pub fn from_form(f: &TernaryQuartic) -> Option<Self> {
        let shaped = |m: &Monomial| m[0] == 0 || (m[0] <= 3 && m[2] >= 1);
        if !f.poly().terms().all(|(m, _)| shaped(m)) {
            return None;
        }
        let a = |k: usize| -> BinForm { (0..=k).map(|i| f.coeff(3 - k, k - i, i + 1)).collect() };
        let a4 = BinaryQuartic::new(std::array::from_fn(|i| -f.coeff(0, 4 - i, i))).ok()?;
        Self::new(f.coeff(3, 0, 1), a(1), a(2), a4).ok()
    }

    pub fn disc(&self) -> Rat {
        long_to_short_nonspecial(self).expect("validated").0.disc()
    }
}

/// `b·x⁴ = f(y)`, as the form `b·x⁴ − f(y, z)` with `I(f) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialShort {
    pub b: Rat,
    pub f: BinaryQuartic,
}

impl SpecialShort {
    pub fn new(b: Rat, f: BinaryQuartic) -> Result<Self> {
        if b.is_zero() {
            return Err(PicardError::Degenerate("b = 0".into()));
        }
        if disc_binary(&f).is_zero() {
            return Err(PicardError::Degenerate("branch quartic is not separable".into()));
        }
        if !invariant_i(&f).is_zero() {
            return Err(PicardError::Precondition("I(f) ≠ 0, so the curve is not special".into()));
        }
        Ok(Self { b, f })
    }

    pub fn to_form(&self) -> TernaryQuartic {
        let mut p = MPoly::term([0, 4, 0], self.b.clone());
        for (i, c) in self.f.c.iter().enumerate() {
            p.add_term([4 - i, 0, i], -c.clone());
        }
        TernaryQuartic::new(p).expect("b ≠ 0")
    }

    pub fn from_form(f: &TernaryQuartic) -> Option<Self> {
        if !f.poly().terms().all(|(m, _)| *m == [0, 4, 0] || m[1] == 0) {
            return None;
        }
        let c = std::array::from_fn(|i| -f.coeff(4 - i, 0, i));
        Self::new(f.coeff(0, 4, 0), BinaryQuartic::new(c).ok()?).ok()
    }

    /// The closed form needs `c₀ ≠ 0`; otherwise the Macaulay route is used.
    pub fn disc(&self) -> Rat {
        disc_short_special(&self.b, &self.f)
            .or_else(|_| disc_ternary(&self.to_form()))
            .expect("discriminant of a valid model")
    }
}

/// `a₀x⁴ + a₁x³ + a₂x² + a₃x = a₄(y, z)` with `aᵢ` forms in (y, z),
/// `8a₀a₂ = 3a₁²` and `16a₀²a₃ = a₁³`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialLong {
    pub a0: Rat,
    pub a1: BinForm,
    pub a2: BinForm,
    pub a3: BinForm,
    pub a4: BinaryQuartic,
}

impl SpecialLong {
    pub fn new(a0: Rat, a1: BinForm, a2: BinForm, a3: BinForm, a4: BinaryQuartic) -> Result<Self> {
        if a0.is_zero() || a1.len() != 2 || a2.len() != 3 || a3.len() != 4 {
            return Err(PicardError::Degenerate("malformed long model".into()));
        }
        if form_scale(&a2, &(rat(8) * &a0)) != form_scale(&form_mul(&a1, &a1), &rat(3)) {
            return Err(PicardError::Precondition("8a₀a₂ = 3a₁² fails".into()));
        }
        if form_scale(&a3, &(rat(16) * &a0 * &a0)) != form_mul(&form_mul(&a1, &a1), &a1) {
            return Err(PicardError::Precondition("16a₀²a₃ = a₁³ fails".into()));
        }
        let m = Self { a0, a1, a2, a3, a4 };
        long_to_short_special(&m)?;
        Ok(m)
    }

    pub fn to_form(&self) -> TernaryQuartic {
        let mut p = MPoly::term([0, 4, 0], self.a0.clone());
        for (k, a) in [(1usize, &self.a1), (2, &self.a2), (3, &self.a3)] {
            for (i, c) in a.iter().enumerate() {
                p.add_term([k - i, 4 - k, i], c.clone());
            }
        }
        for (i, c) in self.a4.c.iter().enumerate() {
            p.add_term([4 - i, 0, i], -c.clone());
        }
        TernaryQuartic::new(p).expect("a₀ ≠ 0")
    }

    pub fn from_form(f: &TernaryQuartic) -> Option<Self> {
        let a = |k: usize| -> BinForm { (0..=k).map(|i| f.coeff(k - i, 4 - k, i)).collect() };
        let a4 = BinaryQuartic::new(std::array::from_fn(|i| -f.coeff(4 - i, 0, i))).ok()?;
        Self::new(f.coeff(0, 4, 0), a(1), a(2), a(3), a4).ok()
    }

    pub fn disc(&self) -> Rat {
        long_to_short_special(self).expect("validated").0.disc()
    }
}

/// Completes the cube with `y ↦ y − a₁/(3a₀)`; returns the short model and that change.
pub fn long_to_short_nonspecial(m: &NonspecialLong) -> Result<(NonspecialShort, LinearChange3)> {
    if form_mul(&m.a1, &m.a1) != form_scale(&m.a2, &(rat(3) * &m.a0)) {
        return Err(PicardError::Precondition("a₁² = 3a₀a₂ fails".into()));
    }
    let e = form_scale(&m.a1, &(rat(3) * &m.a0).recip());
    let cube = form_mul(&form_mul(&m.a1, &m.a1), &m.a1);
    let k = (rat(27) * &m.a0 * &m.a0).recip();
    let f: [Rat; 5] = std::array::from_fn(|i| {
        if i == 0 {
            m.a4.c[0].clone()
        } else {
            &m.a4.c[i] + &cube[i - 1] * &k
        }
    });
    let t = LinearChange3::new([
        [rat(1), -e[0].clone(), -e[1].clone()],
        [rat(0), rat(1), rat(0)],
        [rat(0), rat(0), rat(1)],
    ])?;
    Ok((NonspecialShort::new(m.a0.clone(), BinaryQuartic::new(f)?)?, t))
}

/// Completes the fourth power with `x ↦ x − a₁/(4a₀)`.
pub fn long_to_short_special(m: &SpecialLong) -> Result<(SpecialShort, LinearChange3)> {
    let e = form_scale(&m.a1, &(rat(4) * &m.a0).recip());
    let sq = form_mul(&m.a1, &m.a1);
    let fourth = form_mul(&sq, &sq);
    let k = (rat(256) * pow_i(&m.a0, 3)).recip();
    let f: [Rat; 5] = std::array::from_fn(|i| &m.a4.c[i] + &fourth[i] * &k);
    let t = LinearChange3::new([
        [rat(1), rat(0), rat(0)],
        [-e[0].clone(), rat(1), -e[1].clone()],
        [rat(0), rat(0), rat(1)],
    ])?;
    let short = SpecialShort::new(m.a0.clone(), BinaryQuartic::new(f)?)?;
    // The relations make the substitution exact; confirm it on the forms.
    if m.to_form().transform(&t) != short.to_form() {
        return Err(PicardError::Precondition("long special relations do not hold".into()));
    }
    Ok((short, t))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PicardModel {
    NonspecialShort(NonspecialShort),
    NonspecialLong(NonspecialLong),
    SpecialShort(SpecialShort),
    SpecialLong(SpecialLong),
}

impl PicardModel {
    pub fn to_form(&self) -> TernaryQuartic {
        match self {
            PicardModel::NonspecialShort(m) => m.to_form(),
            PicardModel::NonspecialLong(m) => m.to_form(),
            PicardModel::SpecialShort(m) => m.to_form(),
            PicardModel::SpecialLong(m) => m.to_form(),
        }
    }

    /// Reads a form as one of the four shapes, trying short before long and the
    /// y³-shapes before the x⁴-shapes.
    pub fn recognize(f: &TernaryQuartic) -> Result<Self> {
        if let Some(m) = NonspecialShort::from_form(f) {
            return Ok(PicardModel::NonspecialShort(m));
        }
        if let Some(m) = SpecialShort::from_form(f) {
            return Ok(PicardModel::SpecialShort(m));
        }
        if let Some(m) = NonspecialLong::from_form(f) {
            return Ok(PicardModel::NonspecialLong(m));
        }
        if let Some(m) = SpecialLong::from_form(f) {
            return Ok(PicardModel::SpecialLong(m));
        }
        Err(PicardError::Parse(format!("{f} is not a smooth Picard model in a recognized shape")))
    }

    pub fn disc(&self) -> Rat {
        match self {
            PicardModel::NonspecialShort(m) => m.disc(),
            PicardModel::NonspecialLong(m) => m.disc(),
            PicardModel::SpecialShort(m) => m.disc(),
            PicardModel::SpecialLong(m) => m.disc(),
        }
    }

    pub fn has_special_shape(&self) -> bool {
        matches!(self, PicardModel::SpecialShort(_) | PicardModel::SpecialLong(_))
    }

    /// Short model in the y³-shape, when the model has that shape.
    pub fn nonspecial_short(&self) -> Option<NonspecialShort> {
        match self {
            PicardModel::NonspecialShort(m) => Some(m.clone()),
            PicardModel::NonspecialLong(m) => long_to_short_nonspecial(m).ok().map(|r| r.0),
            _ => None,
        }
    }

    pub fn special_short(&self) -> Option<SpecialShort> {
        match self {
            PicardModel::SpecialShort(m) => Some(m.clone()),
            PicardModel::SpecialLong(m) => long_to_short_special(m).ok().map(|r| r.0),
            _ => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.to_form().is_integral()
    }

    /// Affine equation `lhs = rhs`, with the distinguished variable on the left.
    pub fn render(&self) -> String {
        let lead = if self.has_special_shape() { X } else { Y };
        let (mut lhs, rhs) = self.to_form().poly().split_by(lead);
        let mut rhs = rhs.scale(&rat(-1));
        let mut lead_mono = [0; 3];
        lead_mono[lead] = if lead == X { 4 } else { 3 };
        if lead == Y {
            lead_mono[Z] = 1;
        }
        if lhs.coeff(&lead_mono).is_negative() {
            lhs = lhs.scale(&rat(-1));
            rhs = rhs.scale(&rat(-1));
        }
        format!("{} = {}", lhs.dehomogenize(), rhs.dehomogenize())
    }
}

impl fmt::Display for PicardModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Special,
    Nonspecial,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Special => "special",
            CurveKind::Nonspecial => "nonspecial",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PicardCurve {
    pub kind: CurveKind,
    pub model: PicardModel,
    pub notes: Vec<String>,
}

impl PicardCurve {
    pub fn new(model: PicardModel) -> Result<Self> {
        let kind = match &model {
            PicardModel::SpecialShort(_) | PicardModel::SpecialLong(_) => CurveKind::Special,
            other => {
                let short = other.nonspecial_short().expect("y³-shaped model");
                let (c2, c3, _) = tschirnhausen_normal_form(&short);
                if c2.is_zero() && c3.is_zero() {
                    CurveKind::Special
                } else {
                    CurveKind::Nonspecial
                }
            }
        };
        Ok(Self {
            kind,
            model,
            notes: Vec::new(),
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(PicardModel::recognize(&TernaryQuartic::parse(s)?)?)
    }

    pub fn disc(&self) -> Rat {
        self.model.disc()
    }

    pub fn is_special(&self) -> bool {
        self.kind == CurveKind::Special
    }

    fn with_model(&self, model: PicardModel, note: Option<String>) -> Self {
        let mut notes = self.notes.clone();
        notes.extend(note);
        Self {
            kind: self.kind,
            model,
            notes,
        }
    }
}

impl fmt::Display for PicardCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.model.fmt(f)
    }
}

/// Extended gcd returning `(g, s, t)` with `s·a + t·b = g ≥ 0`.
fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// A unimodular change sending (1:0:0) to `pt` and the tangent there to z = 0.
pub fn normalize_point_tangent(f: &TernaryQuartic, pt: &[BigInt; 3]) -> Result<(TernaryQuartic, LinearChange3)> {
    if !f.is_integral() {
        return Err(PicardError::Precondition("form must be integral".into()));
    }
    let g = pt.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_one() {
        return Err(PicardError::Precondition("point must be primitive integral".into()));
    }
    let ptq: [Rat; 3] = std::array::from_fn(|i| from_int(&pt[i]));
    if !f.eval(&ptq).is_zero() {
        return Err(PicardError::Precondition("point is not on the curve".into()));
    }
    let [p0, p1, p2] = pt;
    // A unimodular matrix with first column `pt`.
    let (g12, s, t) = xgcd(p1, p2);
    let u1 = if g12.is_zero() {
        let e = p0.to_i64().expect("±1");
        LinearChange3::from_ints([[e, 0, 0], [0, e, 0], [0, 0, 1]])?
    } else {
        let (a, b) = (p1 / &g12, p2 / &g12);
        let (_, u, w) = xgcd(p0, &g12);
        let m = [
            [p0.clone(), -w, BigInt::zero()],
            [p1.clone(), &u * &a, -t],
            [p2.clone(), &u * &b, s],
        ];
        LinearChange3::new(m.map(|r| r.map(|c| from_int(&c))))?
    };
    let h = f.transform(&u1);
    let gamma = h.coeff(3, 1, 0);
    let delta = h.coeff(3, 0, 1);
    if gamma.is_zero() && delta.is_zero() {
        return Err(PicardError::Precondition("point is singular".into()));
    }
    let (gi, di) = (gamma.to_integer(), delta.to_integer());
    let c = gi.gcd(&di);
    let (gi, di) = (&gi / &c, &di / &c);
    // (α, β) with αδ − βγ = 1 completes (γ, δ) to a unimodular 2×2 block.
    let (_, s2, t2) = xgcd(&di, &gi);
    let block = LinearChange3::new([
        [rat(1), rat(0), rat(0)],
        [rat(0), from_int(&s2), -from_int(&t2)],
        [rat(0), from_int(&gi), from_int(&di)],
    ])?;
    let total = u1.then(&block.inverse());
    Ok((f.transform(&total), total))
}

/// `(c₂, c₃, c₄)` with the curve isomorphic to `y³ = x⁴ + c₂x² + c₃x + c₄`, obtained by
/// `x ↦ u·x`, `y ↦ v·y` with `u = b·c₀²`, `v = b·c₀³` and then removing the cubic term.
pub fn tschirnhausen_normal_form(m: &NonspecialShort) -> (Rat, Rat, Rat) {
    let u = &m.b * &m.f.c[0] * &m.f.c[0];
    let v = &u * &m.f.c[0];
    let denom = &m.b * pow_i(&v, 3);
    let monic: Vec<Rat> = (0..5)
        .map(|k| &m.f.c[4 - k] * pow_i(&u, k as i64) / &denom)
        .collect();
    let g = QPoly::new(monic);
    let shift = -g.coeff(3) / rat(4);
    let d = g.shift(&shift);
    (d.coeff(2), d.coeff(1), d.coeff(0))
}

/// Lattice moves explored by the minimizer; each preserves one model shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveFamily {
    /// y ↦ pᵃy, x ↦ pᵇx + tz, z ↦ pᶜz.
    ShortNonspecial,
    /// Upper triangular in (y, x, z): fixes (1:0:0) and the line z = 0.
    LongNonspecial,
    /// x ↦ pᵃx, y ↦ pᵇy + tz, z ↦ pᶜz.
    ShortSpecial,
    /// Upper triangular in (x, y, z).
    LongSpecial,
}

impl MoveFamily {
    fn layout(self) -> ([usize; 3], &'static [(usize, usize)]) {
        match self {
            MoveFamily::ShortNonspecial => ([Y, X, Z], &[(1, 2)]),
            MoveFamily::LongNonspecial => ([Y, X, Z], &[(0, 1), (0, 2), (1, 2)]),
            MoveFamily::ShortSpecial => ([X, Y, Z], &[(1, 2)]),
            MoveFamily::LongSpecial => ([X, Y, Z], &[(0, 1), (0, 2), (1, 2)]),
        }
    }

    /// Number of moves with `v_p(det) = total`.
    fn count(self, p: u64, total: u32) -> u128 {
        let (_, offdiag) = self.layout();
        let mut n = 0u128;
        for a in 0..=total {
            for b in 0..=total - a {
                let e = [a, b, total - a - b];
                n += offdiag.iter().map(|&(k, _)| (p as u128).pow(e[k])).product::<u128>();
            }
        }
        n
    }

    /// The largest depth up to `depth` whose move set fits in [`MOVE_BUDGET`] (possibly 0).
    pub fn affordable_depth(self, p: u64, depth: u32) -> u32 {
        let mut total = 0u128;
        for d in 1..=depth {
            total += self.count(p, d);
            if total > MOVE_BUDGET {
                return d - 1;
            }
        }
        depth
    }

    /// Integral matrices in Hermite normal form with `v_p(det) ≤ depth`, paired with `v_p(det)`.
    fn moves(self, p: u64, depth: u32) -> Vec<(LinearChange3, i64)> {
        let (order, offdiag) = self.layout();
        let mut out = Vec::new();
        for total in 1..=depth {
            for a in 0..=total {
                for b in 0..=total - a {
                    let e = [a, b, total - a - b];
                    // Ranges of the off-diagonal entries, reduced modulo the row's diagonal.
                    let ranges: Vec<u64> = offdiag.iter().map(|&(k, _)| p.pow(e[k])).collect();
                    let count: u64 = ranges.iter().product();
                    for mut idx in 0..count {
                        let mut m: [[Rat; 3]; 3] = Default::default();
                        for k in 0..3 {
                            m[order[k]][order[k]] = from_int(&BigInt::from(p).pow(e[k]));
                        }
                        for (slot, &(k, l)) in offdiag.iter().enumerate() {
                            let r = ranges[slot];
                            m[order[k]][order[l]] = rat((idx % r) as i64);
                            idx /= r;
                        }
                        out.push((LinearChange3::new(m).expect("nonsingular"), total as i64));
                    }
                }
            }
        }
        out
    }
}

pub const DEFAULT_DEPTH: u32 = 3;

/// Upper bound on the number of lattice moves tried per descent step.
pub const MOVE_BUDGET: u128 = 200_000;

/// The primitive integral multiple; scaling changes no model, only the form's content.
fn p_normalize(f: &TernaryQuartic) -> TernaryQuartic {
    let (g, s) = f.primitive();
    // Keep the sign so that Δ keeps its sign too (Δ has odd degree 27).
    if s.is_negative() {
        g.scale(&rat(-1)).expect("nonzero")
    } else {
        g
    }
}

fn gauss_vp(f: &TernaryQuartic, p: u64) -> i64 {
    f.gauss_valuation(p).unwrap()
}

/// Greedy descent: apply the move with the largest drop of `v_p(Δ)` until none drops it.
/// Returns the final form and the total change of `v_p(Δ)`.
pub fn lattice_descent(f: &TernaryQuartic, p: u64, family: MoveFamily, depth: u32) -> (TernaryQuartic, i64) {
    let mut cur = p_normalize(f);
    let mut change = 0i64;
    let depth = family.affordable_depth(p, depth);
    if depth == 0 {
        return (cur, change);
    }
    let moves = family.moves(p, depth);
    loop {
        let best = moves
            .par_iter()
            .enumerate()
            .map(|(i, (t, dv))| {
                let g = cur.transform(t);
                let delta = 36 * dv - 27 * gauss_vp(&g, p);
                (delta, i)
            })
            .min()
            .expect("move set is nonempty");
        if best.0 >= 0 {
            return (cur, change);
        }
        let g = cur.transform(&moves[best.1].0);
        let gv = gauss_vp(&g, p);
        cur = g.scale(&prime_pow(p, -gv)).expect("nonzero");
        change += best.0;
    }
}

fn family_for(model: &PicardModel, p: u64) -> MoveFamily {
    match (model.has_special_shape(), p) {
        (false, 3) => MoveFamily::LongNonspecial,
        (false, _) => MoveFamily::ShortNonspecial,
        (true, 2) => MoveFamily::LongSpecial,
        (true, _) => MoveFamily::ShortSpecial,
    }
}

/// Integral model with `v_p(Δ)` no larger than the input's, found by lattice descent in the
/// shape family the short-model theorems allow at `p`.
pub fn minimize_at_prime(c: &PicardCurve, p: u64, depth: u32) -> Result<PicardCurve> {
    let v_in = vp(&c.disc(), p);
    // Moves change v_p(Δ) by multiples of 9, so below 9 nothing can drop.
    if v_in < 9 && c.model.is_integral() {
        return Ok(c.clone());
    }
    let family = family_for(&c.model, p);
    let start = match family {
        MoveFamily::ShortNonspecial => c.model.nonspecial_short().map(|m| m.to_form()),
        MoveFamily::ShortSpecial => c.model.special_short().map(|m| m.to_form()),
        _ => Some(c.model.to_form()),
    }
    .ok_or_else(|| PicardError::Computation("model conversion failed".into()))?;
    let (g, _) = lattice_descent(&start, p, family, depth);
    let model = match family {
        MoveFamily::ShortNonspecial => NonspecialShort::from_form(&g).map(PicardModel::NonspecialShort),
        MoveFamily::ShortSpecial => SpecialShort::from_form(&g).map(PicardModel::SpecialShort),
        MoveFamily::LongNonspecial => NonspecialShort::from_form(&g)
            .map(PicardModel::NonspecialShort)
            .or_else(|| NonspecialLong::from_form(&g).map(PicardModel::NonspecialLong)),
        MoveFamily::LongSpecial => NonspecialShort::from_form(&g)
            .map(PicardModel::NonspecialShort)
            .or_else(|| SpecialShort::from_form(&g).map(PicardModel::SpecialShort))
            .or_else(|| SpecialLong::from_form(&g).map(PicardModel::SpecialLong)),
    }
    .ok_or_else(|| PicardError::Computation(format!("descent left the model shape: {g}")))?;
    let v_out = vp(&model.disc(), p);
    if v_out > v_in || !model.is_integral() || (v_out == v_in && c.model.is_integral()) {
        return Ok(c.clone());
    }
    Ok(c.with_model(model, Some(format!("minimized at {p}: {v_in} -> {v_out}"))))
}

/// Per-prime outcome of [`global_minimal_model`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeExponent {
    pub p: u64,
    pub input: i64,
    /// Best exponent found by minimizing the input at `p` alone.
    pub local: i64,
    /// Exponent in the returned global model.
    pub global: i64,
    /// Below 9 no move can lower the exponent (moves change it by multiples of 9).
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalMinimal {
    pub curve: PicardCurve,
    pub exponents: Vec<PrimeExponent>,
    /// Sign and cofactor of Δ that trial division could not split.
    pub sign: i8,
    pub unfactored: BigInt,
}

impl GlobalMinimal {
    pub fn render_disc(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.sign < 0 {
            parts.push("-1".into());
        }
        for e in self.exponents.iter().filter(|e| e.global > 0) {
            parts.push(if e.global == 1 { e.p.to_string() } else { format!("{}^{}", e.p, e.global) });
        }
        if !self.unfactored.is_one() {
            parts.push(format!("({})", self.unfactored));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" * ")
        }
    }
}

/// Minimizes at every prime dividing Δ of an integral model.
pub fn global_minimal_model(c: &PicardCurve, depth: u32) -> Result<GlobalMinimal> {
    if !c.model.is_integral() {
        return Err(PicardError::Precondition("model must be integral".into()));
    }
    let disc = c.disc();
    let fac = factor_int(&disc.to_integer(), DEFAULT_TRIAL_BOUND);
    let primes = fac.small_primes();
    let local: Vec<i64> = primes
        .par_iter()
        .map(|&p| minimize_at_prime(c, p, depth).map(|m| vp(&m.disc(), p)))
        .collect::<Result<_>>()?;
    let mut cur = c.clone();
    for (i, &p) in primes.iter().enumerate() {
        let cand = minimize_at_prime(&cur, p, depth)?;
        let (dc, dn) = (cur.disc(), cand.disc());
        if primes[..i].iter().all(|&q| vp(&dn, q) <= vp(&dc, q)) {
            cur = cand;
        }
    }
    let final_disc = cur.disc();
    let exponents = primes
        .iter()
        .zip(&local)
        .map(|(&p, &l)| {
            let global = vp(&final_disc, p);
            PrimeExponent {
                p,
                input: vp(&disc, p),
                local: l,
                global,
                certified: global < 9,
            }
        })
        .collect();
    let fac_out = factor_int(&final_disc.to_integer(), DEFAULT_TRIAL_BOUND);
    Ok(GlobalMinimal {
        curve: cur,
        exponents,
        sign: fac_out.sign,
        unfactored: fac_out.unfactored,
    })
}

/// Minimal `v_p(Δ)` among p-integral models `b·y³ = c₀x⁴ + c₂x² + c₃x + c₄` (no cubic term).
/// Such models differ only by diagonal scalings, searched over exponents in `[−bound, bound]`.
pub fn minimize_traceless(m: &NonspecialShort, p: u64, bound: i64) -> Result<(NonspecialShort, i64)> {
    if p == 2 {
        return Err(PicardError::Precondition("removing the cubic term needs p ≠ 2".into()));
    }
    let shift = -&m.f.c[1] / (rat(4) * &m.f.c[0]);
    let depress = LinearChange3::new([
        [rat(1), rat(0), rat(0)],
        [rat(0), rat(1), shift],
        [rat(0), rat(0), rat(1)],
    ])?;
    let f = m.to_form().transform(&depress);
    let v0 = vp(&m.disc(), p);
    let terms: Vec<(Monomial, i64)> = f.poly().terms().map(|(mo, c)| (*mo, vp(c, p))).collect();
    let mut best: Option<(i64, i64, [i64; 3])> = None;
    for ky in -bound..=bound {
        for kx in -bound..=bound {
            for kz in -bound..=bound {
                let e = [ky, kx, kz];
                let g = terms
                    .iter()
                    .map(|(mo, v)| v + (0..3).map(|i| mo[i] as i64 * e[i]).sum::<i64>())
                    .min()
                    .expect("nonzero form");
                let v = v0 + 36 * (ky + kx + kz) - 27 * g;
                let key = (v, ky.abs() + kx.abs() + kz.abs(), e);
                if best.as_ref().is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
        }
    }
    let (v, _, e) = best.expect("box is nonempty");
    let scale = LinearChange3::diag(prime_pow(p, e[0]), prime_pow(p, e[1]), prime_pow(p, e[2]));
    let g = f.transform(&scale);
    let g = g.scale(&prime_pow(p, -gauss_vp(&g, p)))?;
    let short = NonspecialShort::from_form(&g)
        .ok_or_else(|| PicardError::Computation("diagonal scaling left the short shape".into()))?;
    debug_assert_eq!(vp(&short.disc(), p), v);
    Ok((short, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::ratio;

    fn curve(s: &str) -> PicardCurve {
        PicardCurve::parse(s).unwrap()
    }

    #[test]
    fn recognizes_shapes() {
        let c = curve("y^3 = x^4 - 1");
        assert!(matches!(c.model, PicardModel::NonspecialShort(_)));
        assert_eq!(c.kind, CurveKind::Special);
        let c = curve("y^3 = x^4 + x^2 + 1");
        assert_eq!(c.kind, CurveKind::Nonspecial);
        let c = curve("2*x^4 = y^4 + 6*y^2 - 3");
        assert!(matches!(c.model, PicardModel::SpecialShort(_)));
        let c = curve("2*x^4 - 4*x^3 + 3*x^2 - x = y^3");
        // Also a y³-shaped short model.
        assert!(matches!(c.model, PicardModel::NonspecialShort(_)));
        assert_eq!(c.kind, CurveKind::Special);
    }

    #[test]
    fn long_nonspecial_to_short() {
        let m = NonspecialLong::new(
            rat(1),
            vec![rat(3), rat(0)],
            vec![rat(3), rat(0), rat(0)],
            BinaryQuartic::from_ints([1, 0, 0, 0, 1]),
        )
        .unwrap();
        let (s, t) = long_to_short_nonspecial(&m).unwrap();
        assert_eq!(s.f, BinaryQuartic::from_ints([1, 1, 0, 0, 1]));
        assert_eq!(m.to_form().transform(&t), s.to_form());
        assert_eq!(t.det(), rat(1));
    }

    #[test]
    fn long_special_to_short() {
        let m = SpecialLong::from_form(&TernaryQuartic::parse("2*x^4 - 4*x^3*z + 3*x^2*z^2 - x*z^3 - y^3*z").unwrap())
            .unwrap();
        let (s, t) = long_to_short_special(&m).unwrap();
        assert_eq!(s.b, rat(2));
        assert_eq!(s.f.c, [rat(0), rat(1), rat(0), rat(0), ratio(1, 8)]);
        assert_eq!(m.to_form().transform(&t), s.to_form());
        assert!(SpecialLong::new(rat(2), vec![rat(0), rat(-4)], vec![rat(0), rat(0), rat(3)], vec![rat(0); 4], s.f.clone()).is_err());
    }

    #[test]
    fn tschirnhausen_examples() {
        let m = NonspecialShort::from_ints(1, [1, 4, 6, 4, 2]).unwrap();
        assert_eq!(tschirnhausen_normal_form(&m), (rat(0), rat(0), rat(1)));
        let m = NonspecialShort::from_ints(1, [1, 0, 0, 1, 0]).unwrap();
        assert_eq!(tschirnhausen_normal_form(&m), (rat(0), rat(1), rat(0)));
        let m = NonspecialShort::from_ints(2, [3, 0, 0, 1, 0]).unwrap();
        assert_eq!(tschirnhausen_normal_form(&m), (rat(0), ratio(1, 17496), rat(0)));
    }

    #[test]
    fn point_tangent_normalization() {
        let f = TernaryQuartic::parse("y^3*z - x^4 + z^4").unwrap();
        let one = BigInt::one;
        let (g, t) = normalize_point_tangent(&f, &[one(), BigInt::zero(), BigInt::zero()]).unwrap();
        assert_eq!(g, f);
        assert!(t.is_unimodular());
        // (y:x:z) = (0:1:1) lies on the curve.
        let (g, t) = normalize_point_tangent(&f, &[BigInt::zero(), one(), one()]).unwrap();
        assert!(t.is_unimodular());
        assert!(g.coeff(4, 0, 0).is_zero() && g.coeff(3, 1, 0).is_zero());
        assert_eq!(disc_ternary(&g).unwrap(), disc_ternary(&f).unwrap());
        assert!(normalize_point_tangent(&f, &[one(), one(), one()]).is_err());
    }

    #[test]
    fn remark_example_minimizes_to_ten() {
        let c = curve("y^3 = 7*(x^4 - 9*x^2 - 10*x - 9)");
        assert_eq!(vp(&c.disc(), 7), 19);
        let m = minimize_at_prime(&c, 7, DEFAULT_DEPTH).unwrap();
        assert_eq!(vp(&m.disc(), 7), 10);
        assert!(m.model.is_integral());
        let again = minimize_at_prime(&m, 7, DEFAULT_DEPTH).unwrap();
        assert_eq!(again.model, m.model);
    }

    #[test]
    fn exponent_three_is_left_alone() {
        let c = curve("y^3*z = 17*x^4 + x^3*z + 2*x^2*z^2 + x*z^3 - z^4");
        assert_eq!(vp(&c.disc(), 17), 3);
        let m = minimize_at_prime(&c, 17, DEFAULT_DEPTH).unwrap();
        assert_eq!(m.model, c.model);
    }

    #[test]
    fn traceless_minimum_is_twelve() {
        let PicardModel::NonspecialShort(m) = curve("y^3*z = 17*x^4 + x^3*z + 2*x^2*z^2 + x*z^3 - z^4").model else {
            panic!("short model expected");
        };
        let (t, v) = minimize_traceless(&m, 17, 6).unwrap();
        assert_eq!(v, 12);
        assert!(t.f.c[1].is_zero());
        assert_eq!(vp(&t.disc(), 17), 12);
        // Lower coefficients are those of 17x⁴ + x³ + 2x² + x − 1 at x − 1/68, rescaled.
        let expected = "y^3*z - x^4 - 269/8*x^2*z^2 - 2177/8*x*z^3 + 1275683/256*z^4";
        assert_eq!(t.to_form(), TernaryQuartic::parse(expected).unwrap());
    }

    #[test]
    fn standard_special_curve_at_two() {
        for s in ["x^4 = y^3 + 1", "y^3 = x^4 - 1"] {
            let c = curve(s);
            assert_eq!(vp(&c.disc(), 2), 16);
            let m = minimize_at_prime(&c, 2, DEFAULT_DEPTH).unwrap();
            assert_eq!(vp(&m.disc(), 2), 7, "{s}");
            let g = global_minimal_model(&c, DEFAULT_DEPTH).unwrap();
            let exps: Vec<(u64, i64)> = g.exponents.iter().map(|e| (e.p, e.global)).collect();
            assert_eq!(exps, [(2, 7), (3, 9)]);
            assert_eq!(g.sign as i32, c.disc().signum().to_integer().to_i32().unwrap());
        }
    }

    #[test]
    fn special_long_minimization_at_two() {
        let c = PicardCurve::new(PicardModel::SpecialShort(
            SpecialShort::new(rat(1), BinaryQuartic::from_ints([0, 1, 0, 0, 1])).unwrap(),
        ))
        .unwrap();
        let m = minimize_at_prime(&c, 2, DEFAULT_DEPTH).unwrap();
        assert_eq!(vp(&m.disc(), 2), 7);
        assert_eq!(m.kind, CurveKind::Special);
    }
}
