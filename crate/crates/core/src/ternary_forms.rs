//! Plane quartics, the Macaulay resultant of three ternary forms, and the discriminant Δ₃,₄.
//!
//! Variables are ordered (y, x, z) throughout, matching [`crate::mpoly::Monomial`].

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::rat::{common_denominator, content_of_integers, from_int, gauss_valuation, pow_i, rat, Rat, Valuation};
use crate::binary_forms::{disc_binary, BinaryQuartic};
use crate::error::{PicardError, Result};
use crate::mpoly::{MPoly, Monomial};
use crate::parse::parse_equation;

pub const Y: usize = 0;
pub const X: usize = 1;
pub const Z: usize = 2;

/// A nonzero homogeneous quartic in y, x, z.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryQuartic {
    poly: MPoly,
}

impl TernaryQuartic {
    pub fn new(poly: MPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(PicardError::Degenerate("zero ternary form".into()));
        }
        if !poly.is_homogeneous(4) {
            return Err(PicardError::Degenerate(format!("{poly} is not a quartic form")));
        }
        Ok(Self { poly })
    }

    /// Parses a form or an affine equation in x, y; affine input is homogenized with z.
    pub fn parse(s: &str) -> Result<Self> {
        let p = parse_equation(s)?;
        if p.is_homogeneous(4) {
            return Self::new(p);
        }
        let h = p
            .homogenize(4)
            .ok_or_else(|| PicardError::Parse(format!("{s:?} is neither a quartic form nor affine of degree ≤ 4")))?;
        Self::new(h)
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    /// Coefficient of yᵃ xᵇ zᶜ.
    pub fn coeff(&self, a: usize, b: usize, c: usize) -> Rat {
        self.poly.coeff(&[a, b, c])
    }

    pub fn scale(&self, s: &Rat) -> Result<Self> {
        Self::new(self.poly.scale(s))
    }

    pub fn partial(&self, var: usize) -> MPoly {
        self.poly.derivative(var)
    }

    pub fn transform(&self, t: &LinearChange3) -> Self {
        transform(self, t)
    }

    pub fn eval(&self, pt: &[Rat; 3]) -> Rat {
        self.poly.eval(pt)
    }

    pub fn is_integral(&self) -> bool {
        self.poly.terms().all(|(_, c)| c.is_integer())
    }

    pub fn gauss_valuation(&self, p: u64) -> Valuation {
        let cs: Vec<Rat> = self.poly.terms().map(|(_, c)| c.clone()).collect();
        gauss_valuation(cs.iter(), p)
    }

    /// Returns `(G, s)` with `G` primitive integral and `self = s·G`.
    pub fn primitive(&self) -> (Self, Rat) {
        let (ints, s) = integral_scaling(&self.poly);
        (Self { poly: ints }, s)
    }
}

impl fmt::Display for TernaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// `p = s·q` with `q` primitive integral.
fn integral_scaling(p: &MPoly) -> (MPoly, Rat) {
    let cs: Vec<Rat> = p.terms().map(|(_, c)| c.clone()).collect();
    let den = common_denominator(cs.iter());
    let nums: Vec<BigInt> = cs.iter().map(|c| (c * from_int(&den)).to_integer()).collect();
    let mut g = content_of_integers(nums.iter());
    if g.is_zero() {
        g = BigInt::one();
    }
    let s = Rat::new(g, den);
    (p.scale(&s.recip()), s)
}

/// A linear change of variables v ↦ T·v acting on forms by F ↦ F∘T.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearChange3 {
    m: [[Rat; 3]; 3],
}

impl LinearChange3 {
    pub fn new(m: [[Rat; 3]; 3]) -> Result<Self> {
        let t = Self { m };
        if t.det().is_zero() {
            return Err(PicardError::Degenerate("singular linear change".into()));
        }
        Ok(t)
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(m.map(|r| r.map(rat)))
    }

    pub fn identity() -> Self {
        Self::diag(rat(1), rat(1), rat(1))
    }

    pub fn diag(a: Rat, b: Rat, c: Rat) -> Self {
        let z = Rat::zero;
        Self {
            m: [[a, z(), z()], [z(), b, z()], [z(), z(), c]],
        }
    }

    /// Exchanges two variables.
    pub fn swap(i: usize, j: usize) -> Self {
        let mut t = Self::identity();
        t.m.swap(i, j);
        t
    }

    pub fn matrix(&self) -> &[[Rat; 3]; 3] {
        &self.m
    }

    pub fn det(&self) -> Rat {
        let m = &self.m;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    pub fn is_integral(&self) -> bool {
        self.m.iter().flatten().all(|c| c.is_integer())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.det().abs().is_one()
    }

    /// The change performing `self` first and then `o`: F∘self∘o, i.e. the matrix product.
    pub fn then(&self, o: &LinearChange3) -> LinearChange3 {
        let mut m: [[Rat; 3]; 3] = Default::default();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| &self.m[i][k] * &o.m[k][j]).sum();
            }
        }
        LinearChange3 { m }
    }

    pub fn inverse(&self) -> LinearChange3 {
        let m = &self.m;
        let d = self.det();
        let cof = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
        };
        let mut inv: [[Rat; 3]; 3] = Default::default();
        for (i, row) in inv.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = cof(j, i) / &d;
            }
        }
        LinearChange3 { m: inv }
    }

    /// Image of a point: the column vector T·v.
    pub fn apply_point(&self, v: &[Rat; 3]) -> [Rat; 3] {
        std::array::from_fn(|i| (0..3).map(|k| &self.m[i][k] * &v[k]).sum())
    }

    fn images(&self) -> [MPoly; 3] {
        std::array::from_fn(|i| {
            let mut p = MPoly::zero();
            for k in 0..3 {
                let mut mono = [0; 3];
                mono[k] = 1;
                p.add_term(mono, self.m[i][k].clone());
            }
            p
        })
    }
}

impl fmt::Display for LinearChange3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .m
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(crate::arith::rat::fmt_rat).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// F∘T, so that Δ(F∘T) = det(T)³⁶ Δ(F).
pub fn transform(f: &TernaryQuartic, t: &LinearChange3) -> TernaryQuartic {
    TernaryQuartic {
        poly: f.poly.substitute(&t.images()),
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            m.swap(piv, k);
            sign = !sign;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pk = &pivot_row[k];
        rest.par_iter_mut().for_each(|row| {
            let rk = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &row[j] * pk - &rk * &pivot_row[j];
                row[j] = v.div_floor(&prev);
            }
        });
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Monomials of degree `d`, lexicographically descending in the variables listed by `order`.
fn monomials(d: usize, order: [usize; 3]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            let mut m = [0; 3];
            m[order[0]] = a;
            m[order[1]] = b;
            m[order[2]] = d - a - b;
            out.push(m);
        }
    }
    out
}

/// Macaulay quotient det(M)/det(extraneous minor) for integral forms; `None` if the minor vanishes.
fn macaulay_quotient(forms: &[(MPoly, usize); 3], order: [usize; 3]) -> Option<Rat> {
    let deg: [usize; 3] = std::array::from_fn(|i| forms[i].1);
    let big_d = deg.iter().sum::<usize>() - 2;
    let monos = monomials(big_d, order);
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let n = monos.len();
    let mut matrix = vec![vec![BigInt::zero(); n]; n];
    let mut extraneous = Vec::new();
    for (r, m) in monos.iter().enumerate() {
        let divisible: Vec<usize> = (0..3).filter(|&k| m[order[k]] >= deg[k]).collect();
        if divisible.len() >= 2 {
            extraneous.push(r);
        }
        let k = divisible[0];
        let mut shift = *m;
        shift[order[k]] -= deg[k];
        for (t, c) in forms[k].0.terms() {
            let col = index[&[t[0] + shift[0], t[1] + shift[1], t[2] + shift[2]]];
            matrix[r][col] = c.to_integer();
        }
    }
    let minor: Vec<Vec<BigInt>> = extraneous
        .iter()
        .map(|&r| extraneous.iter().map(|&c| matrix[r][c].clone()).collect())
        .collect();
    let dm = det_bareiss(minor);
    if dm.is_zero() {
        return None;
    }
    Some(Rat::new(det_bareiss(matrix), dm))
}

const RETRIES: u64 = 8;

/// A deterministic pseudo-random change with det 1 and small integer entries.
fn unimodular_retry(attempt: u64) -> LinearChange3 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a7c_0000 + attempt);
    let mut t = LinearChange3::identity();
    for _ in 0..4 {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        let k: i64 = [-2, -1, 1, 2][rng.gen_range(0..4)];
        let mut e = LinearChange3::identity();
        e.m[i][j] = rat(k);
        t = t.then(&e);
    }
    t
}

/// Resultant of three ternary forms, normalized so that Res(v₀^d₀, v₁^d₁, v₂^d₂) = 1
/// where `order` lists the variables (v₀, v₁, v₂).
pub fn resultant_in_order(forms: [(&MPoly, usize); 3], order: [usize; 3]) -> Result<Rat> {
    for (p, d) in &forms {
        if *d == 0 || !p.is_homogeneous(*d) {
            return Err(PicardError::Degenerate("resultant input is not a form of the stated degree".into()));
        }
    }
    let mut ints: Vec<(MPoly, usize)> = Vec::new();
    let mut correction = rat(1);
    for (k, (p, d)) in forms.iter().enumerate() {
        if p.is_zero() {
            return Ok(Rat::zero());
        }
        let (q, s) = integral_scaling(p);
        // Res is homogeneous of degree ∏_{j≠k} d_j in the coefficients of the k-th form.
        let w: usize = (0..3).filter(|&j| j != k).map(|j| forms[j].1).product();
        correction *= pow_i(&s, w as i64);
        ints.push((q, *d));
    }
    let weight: usize = forms.iter().map(|(_, d)| d).product();
    for attempt in 0..=RETRIES {
        // Unimodular changes leave the resultant unchanged (det(T)^{d₀d₁d₂} = 1).
        let trial: [(MPoly, usize); 3] = if attempt == 0 {
            std::array::from_fn(|i| ints[i].clone())
        } else {
            let t = unimodular_retry(attempt);
            debug_assert!(t.det().is_one());
            let img = t.images();
            std::array::from_fn(|i| (ints[i].0.substitute(&img), ints[i].1))
        };
        if let Some(q) = macaulay_quotient(&trial, order) {
            if !q.is_integer() {
                return Err(PicardError::Verification(format!(
                    "Macaulay quotient {q} of integral forms is not integral (weight {weight})"
                )));
            }
            return Ok(q * correction);
        }
    }
    perturbed_resultant(&ints, order).map(|q| q * correction)
}

/// Res(F₀ + ε v₀^d₀, F₁ + ε v₁^d₁, F₂ + ε v₂^d₂) is a polynomial in ε of degree at most
/// Σₖ ∏_{j≠k} d_j; it is sampled where the minor survives and interpolated at ε = 0.
fn perturbed_resultant(ints: &[(MPoly, usize)], order: [usize; 3]) -> Result<Rat> {
    let deg: usize = (0..3)
        .map(|k| (0..3).filter(|&j| j != k).map(|j| ints[j].1).product::<usize>())
        .sum();
    let mut samples: Vec<(Rat, Rat)> = Vec::new();
    let mut eps = 0i64;
    while samples.len() <= deg {
        eps += 1;
        if eps as usize > 8 * (deg + 1) {
            return Err(PicardError::Computation(
                "extraneous Macaulay minor vanished for every perturbation".into(),
            ));
        }
        let trial: [(MPoly, usize); 3] = std::array::from_fn(|k| {
            let mut mono = [0; 3];
            mono[order[k]] = ints[k].1;
            (ints[k].0.add(&MPoly::term(mono, rat(eps))), ints[k].1)
        });
        if let Some(q) = macaulay_quotient(&trial, order) {
            samples.push((rat(eps), q));
        }
    }
    let mut at_zero = Rat::zero();
    for (i, (ei, ci)) in samples.iter().enumerate() {
        let mut w = rat(1);
        for (j, (ej, _)) in samples.iter().enumerate() {
            if i != j {
                w *= ej / (ej - ei);
            }
        }
        at_zero += ci * w;
    }
    if !at_zero.is_integer() {
        return Err(PicardError::Verification(format!("interpolated resultant {at_zero} is not integral")));
    }
    Ok(at_zero)
}

/// Macaulay resultant of three ternary quartics with Res(x⁴, y⁴, z⁴) = 1.
pub fn macaulay_resultant(f1: &TernaryQuartic, f2: &TernaryQuartic, f3: &TernaryQuartic) -> Result<Rat> {
    resultant_in_order([(&f1.poly, 4), (&f2.poly, 4), (&f3.poly, 4)], [X, Y, Z])
}

/// Δ(F) = Res(D_yF, D_xF, D_zF)/2¹⁴, with Res normalized by Res(x³, y³, z³) = 1.
pub fn disc_ternary(f: &TernaryQuartic) -> Result<Rat> {
    let (g, s) = f.primitive();
    let partials = [g.partial(Y), g.partial(X), g.partial(Z)];
    if partials.iter().any(MPoly::is_zero) {
        return Ok(Rat::zero());
    }
    let res = resultant_in_order(
        [(&partials[0], 3), (&partials[1], 3), (&partials[2], 3)],
        [X, Y, Z],
    )?;
    let r = res.to_integer();
    let two14 = BigInt::from(1u32 << 14);
    if !r.is_multiple_of(&two14) {
        return Err(PicardError::Verification(format!(
            "resultant {r} of integral partials is not divisible by 2^14"
        )));
    }
    Ok(from_int(&(r / two14)) * pow_i(&s, 27))
}

/// The form b·y³z − f(x, z).
pub fn short_nonspecial_form(b: &Rat, f: &BinaryQuartic) -> Result<TernaryQuartic> {
    let mut p = MPoly::term([3, 0, 1], b.clone());
    for (i, c) in f.c.iter().enumerate() {
        p.add_term([0, 4 - i, i], -c.clone());
    }
    TernaryQuartic::new(p)
}

/// The form b·x⁴ − f(y, z).
pub fn short_special_form(b: &Rat, f: &BinaryQuartic) -> Result<TernaryQuartic> {
    let mut p = MPoly::term([0, 4, 0], b.clone());
    for (i, c) in f.c.iter().enumerate() {
        p.add_term([4 - i, 0, i], -c.clone());
    }
    TernaryQuartic::new(p)
}

fn check_short(b: &Rat, f: &BinaryQuartic) -> Result<()> {
    if b.is_zero() {
        return Err(PicardError::Degenerate("b = 0".into()));
    }
    if f.c[0].is_zero() {
        return Err(PicardError::Degenerate("closed form needs a true quartic (c₀ ≠ 0)".into()));
    }
    Ok(())
}

/// Δ(b·y³z − f(x,z)) = −3⁹ b¹² c₀³ Δ(f)².
pub fn disc_short_nonspecial(b: &Rat, f: &BinaryQuartic) -> Result<Rat> {
    check_short(b, f)?;
    let d = disc_binary(f);
    Ok(-rat(19683) * pow_i(b, 12) * pow_i(&f.c[0], 3) * &d * &d)
}

/// Δ(b·x⁴ − f(y,z)) = −2¹⁶ b⁹ Δ(f)³.
pub fn disc_short_special(b: &Rat, f: &BinaryQuartic) -> Result<Rat> {
    check_short(b, f)?;
    Ok(special_closed_form(b, f))
}

fn special_closed_form(b: &Rat, f: &BinaryQuartic) -> Rat {
    -rat(65536) * pow_i(b, 9) * pow_i(&disc_binary(f), 3)
}

/// True iff all partials of F vanish at `pt`.
pub fn is_singular_point(f: &TernaryQuartic, pt: &[Rat; 3]) -> bool {
    (0..3).all(|v| f.partial(v).eval(pt).is_zero())
}
