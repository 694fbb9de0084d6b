//! Special polynomials, the 26 classes with good reduction outside {2, 3}, and their
//! 800 twists `x⁴ = a·g(y)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::factor::{factor_rat, nth_power_free_part, DEFAULT_TRIAL_BOUND};
use crate::arith::hilbert::{nontrivial_places, Place};
use crate::arith::rat::{rat, vp, Rat};
use crate::arith::unramified::splitting_field_unramified;
use crate::binary_forms::{
    are_equivalent, disc_binary, equivalences, fourth_power_class, hessian_shadow, invariant_i,
    rational_symmetries, BinaryQuartic,
};
use crate::error::{PicardError, Result};
use crate::models::SpecialShort;
use crate::poly::QPoly;

/// `g = y⁴ + 6by² + cy − 3b²`, the normal form of a quartic with `I(g) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialPolynomial {
    pub b: Rat,
    pub c: Rat,
}

impl SpecialPolynomial {
    pub fn new(b: Rat, c: Rat) -> Result<Self> {
        let sp = SpecialPolynomial { b, c };
        if special_poly_discriminant(&sp).is_zero() {
            return Err(PicardError::Degenerate("64b³ + c² = 0".into()));
        }
        Ok(sp)
    }

    pub fn to_quartic(&self) -> BinaryQuartic {
        BinaryQuartic {
            c: [
                rat(1),
                rat(0),
                rat(6) * &self.b,
                self.c.clone(),
                rat(-3) * &self.b * &self.b,
            ],
        }
    }

    /// Reads `(b, c)` off a monic depressed quartic with `I = 0`.
    pub fn from_quartic(g: &BinaryQuartic) -> Option<Self> {
        if !g.c[0].is_one() || !g.c[1].is_zero() {
            return None;
        }
        let b = &g.c[2] / rat(6);
        if g.c[4] != rat(-3) * &b * &b {
            return None;
        }
        Self::new(b, g.c[3].clone()).ok()
    }
}

/// `Δ(g) = −27(64b³ + c²)²`.
pub fn special_poly_discriminant(sp: &SpecialPolynomial) -> Rat {
    let s = rat(64) * &sp.b * &sp.b * &sp.b + &sp.c * &sp.c;
    rat(-27) * &s * &s
}

/// Whether the conic `d₁x² + d₂y² = z²` has no rational point, i.e. the biquadratic
/// descent for `(d₁, d₂)` is obstructed. An unobstructed pair comes with a primitive point.
pub fn biquadratic_obstruction(d1: i64, d2: i64) -> Result<(bool, Option<[i64; 3]>)> {
    let (q1, q2) = (rat(d1), rat(d2));
    if d1 == 0 || d2 == 0 {
        return Err(PicardError::Precondition("d₁, d₂ must be nonzero".into()));
    }
    for q in [&q1, &q2] {
        if &nth_power_free_part(q, 2).0 != q {
            return Err(PicardError::Precondition(format!("{q} is not squarefree")));
        }
    }
    if nth_power_free_part(&(&q1 * &q2 / rat(-3)), 2).0 != rat(1) {
        return Err(PicardError::Precondition("d₁d₂ is not −3 times a square".into()));
    }
    if !nontrivial_places(&q1, &q2).is_empty() {
        return Ok((true, None));
    }
    let witness = conic_point(d1, d2, 64).ok_or_else(|| {
        PicardError::Computation(format!("no point on {d1}x² + {d2}y² = z² in the search box"))
    })?;
    Ok((false, Some(witness)))
}

fn conic_point(d1: i64, d2: i64, bound: i64) -> Option<[i64; 3]> {
    for h in 1..=bound {
        for x in 0..=h {
            for y in 0..=h {
                if x.max(y) != h {
                    continue;
                }
                let rhs = d1 * x * x + d2 * y * y;
                if rhs < 0 {
                    continue;
                }
                let z = (rhs as f64).sqrt().round() as i64;
                if z * z == rhs && num_integer::gcd(num_integer::gcd(x, y), z) == 1 {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

// Generating polynomials (coefficients from the leading term down) of the number fields
// unramified outside {2, 3} whose discriminant is −3 modulo squares.
const QUADRATIC_FIELDS: [&[i64]; 1] = [&[1, 1, 1]];
const CUBIC_FIELDS: [&[i64]; 4] = [&[1, 0, 0, -2], &[1, 0, 0, -3], &[1, 0, 0, -6], &[1, 0, 0, -12]];
const QUARTIC_FIELDS: [&[i64]; 8] = [
    &[1, 0, -6, 0, -3],
    &[1, 0, -12, 0, -12],
    &[1, 0, 6, 8, -3],
    &[1, 0, -24, 32, -48],
    &[1, 0, 12, -8, -12],
    &[1, 0, -36, 96, -108],
    &[1, 0, 12, 64, -12],
    &[1, 0, 12, -16, -12],
];
const BIQUADRATIC_PAIRS: [(i64, i64); 3] = [(-1, 3), (2, -6), (-2, 6)];

// Rows of the classification: a polynomial and, unless it is its own shadow, a
// representative of its shadow class.
const ROWS: [([i64; 5], Option<[i64; 5]>); 14] = [
    ([1, 0, 0, 1, 0], None),
    ([1, 0, 0, 2, 0], Some([0, 1, 0, 0, -2])),
    ([1, 0, 0, 3, 0], Some([0, 1, 0, 0, -3])),
    ([1, 0, 0, 6, 0], Some([0, 1, 0, 0, -6])),
    ([1, 0, 0, 12, 0], Some([0, 1, 0, 0, -12])),
    ([1, 0, -6, 0, -3], Some([1, 0, 6, 0, -3])),
    ([1, 0, -12, 0, -12], Some([1, 0, 12, 0, -12])),
    ([1, 0, 6, 8, -3], Some([1, 4, -6, -4, -7])),
    ([1, 0, -24, 32, -48], Some([1, -4, 24, -16, -32])),
    ([1, 0, 12, -8, -12], Some([1, -2, -12, 4, -14])),
    ([1, 0, -36, 96, -108], Some([1, -8, 36, -48, -12])),
    ([1, 0, 12, 64, -12], Some([1, 16, -12, -32, -140])),
    ([1, 0, 12, -16, -12], Some([1, -4, -12, 8, -20])),
    ([1, 0, -12, 32, -12], None),
];

/// Factorization of the biquadratic entry into quadratics over the fields `ℚ(√−2)`, `ℚ(√6)`.
const BIQUADRATIC_FACTORS: [[i64; 3]; 2] = [[1, -4, 6], [1, 4, -2]];

/// One of the 26 special polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialClass {
    pub index: usize,
    pub poly: BinaryQuartic,
    /// Index of the entry equivalent to the Hessian shadow (itself when self-paired).
    pub shadow: usize,
    /// Scalars of the rational symmetries, as fourth-power-free representatives.
    pub scal: Vec<Rat>,
}

impl SpecialClass {
    pub fn is_self_paired(&self) -> bool {
        self.shadow == self.index
    }

    pub fn render(&self) -> String {
        self.poly.render("x")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationTable {
    pub classes: Vec<SpecialClass>,
}

impl ClassificationTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The class of `m` as `(index, canonical a)` with `m ≅ (x⁴ = a·g_index(y))`.
    pub fn identify(&self, m: &SpecialShort) -> Option<(usize, Rat)> {
        self.classes.iter().find_map(|cl| {
            // f∘A = μ·g, so b·x⁴ = μ·g(y) after the change of y.
            let (_, mu) = equivalences(&cl.poly, &m.f).into_iter().next()?;
            Some((cl.index, canonical_twist(&(mu / &m.b), &cl.scal)))
        })
    }
}

impl fmt::Display for ClassificationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cl in &self.classes {
            let scal: Vec<String> = cl.scal.iter().map(|s| s.to_string()).collect();
            writeln!(
                f,
                "{:2}  {}  shadow={}  scal={{{}}}",
                cl.index,
                cl.render(),
                cl.shadow,
                scal.join(",")
            )?;
        }
        Ok(())
    }
}

fn poly_of(c: &[i64]) -> QPoly {
    QPoly::from_ints(&c.iter().rev().copied().collect::<Vec<_>>())
}

fn certificate(what: &str, g: &impl fmt::Display) -> PicardError {
    PicardError::Verification(format!("{what}: {g}"))
}

fn check_unramified_outside_23(g: &QPoly) -> Result<()> {
    let (_, factors, unf) = factor_rat(&g.discriminant(), DEFAULT_TRIAL_BOUND);
    if !unf.is_one() {
        return Err(certificate("discriminant not fully factored", &g.render("x")));
    }
    for (p, _) in factors {
        let p: u64 = (&p).try_into().map_err(|_| certificate("prime out of range", &p))?;
        if p > 3 && !splitting_field_unramified(g, p)? {
            return Err(certificate(&format!("ramified at {p}"), &g.render("x")));
        }
    }
    Ok(())
}

fn check_fields() -> Result<()> {
    let all = QUADRATIC_FIELDS.iter().chain(&CUBIC_FIELDS).chain(&QUARTIC_FIELDS);
    for c in all {
        let g = poly_of(c);
        check_unramified_outside_23(&g)?;
        let d = g.discriminant();
        if nth_power_free_part(&(d / rat(-3)), 2).0 != rat(1) {
            return Err(certificate("field discriminant is not −3 mod squares", &g.render("x")));
        }
    }
    Ok(())
}

fn embedded_rows() -> (Vec<BinaryQuartic>, Vec<usize>) {
    let mut polys = Vec::new();
    let mut shadow = Vec::new();
    for (left, right) in ROWS {
        let i = polys.len();
        polys.push(BinaryQuartic::from_ints(left));
        match right {
            Some(r) => {
                polys.push(BinaryQuartic::from_ints(r));
                shadow.extend([i + 1, i]);
            }
            None => shadow.push(i),
        }
    }
    (polys, shadow)
}

fn with_symmetries(polys: Vec<BinaryQuartic>, shadow: &[usize]) -> ClassificationTable {
    let classes = polys
        .into_par_iter()
        .enumerate()
        .map(|(index, poly)| {
            let mut scal: Vec<Rat> = rational_symmetries(&poly).into_iter().map(|(_, mu)| mu).collect();
            scal.sort_by_key(twist_key);
            scal.dedup();
            SpecialClass {
                index,
                poly,
                shadow: shadow[index],
                scal,
            }
        })
        .collect();
    ClassificationTable { classes }
}

impl ClassificationTable {
    /// The embedded table without re-running the certificates; Scal is still computed.
    pub fn embedded() -> Self {
        let (polys, shadow) = embedded_rows();
        with_symmetries(polys, &shadow)
    }
}

/// Reproduces the 26 classes, checking every certificate on the way.
pub fn classify_special_good_outside_23() -> Result<ClassificationTable> {
    check_fields()?;
    let (polys, shadow) = embedded_rows();

    // Special, separable, unramified outside {2, 3}.
    polys.par_iter().try_for_each(|g| {
        if !invariant_i(g).is_zero() {
            return Err(certificate("I ≠ 0", &g.render("x")));
        }
        if disc_binary(g).is_zero() {
            return Err(certificate("not separable", &g.render("x")));
        }
        check_unramified_outside_23(&g.to_poly())
    })?;

    // Pairwise non-equivalence.
    let pairs: Vec<(usize, usize)> = (0..polys.len())
        .flat_map(|i| (i + 1..polys.len()).map(move |j| (i, j)))
        .collect();
    if let Some(&(i, j)) = pairs
        .par_iter()
        .find_any(|&&(i, j)| are_equivalent(&polys[i], &polys[j]).is_some())
    {
        return Err(PicardError::Verification(format!(
            "{} and {} are equivalent",
            polys[i].render("x"),
            polys[j].render("x")
        )));
    }

    // Shadow pairing, in both directions.
    (0..polys.len()).into_par_iter().try_for_each(|i| {
        let s = hessian_shadow(&polys[i])?;
        if are_equivalent(&s, &polys[shadow[i]]).is_none() {
            return Err(certificate("shadow does not match its row", &polys[i].render("x")));
        }
        Ok(())
    })?;

    // Biquadratic branch: only (−2, 6) survives, and the last row realizes it.
    for (d1, d2) in BIQUADRATIC_PAIRS {
        let (obstructed, _) = biquadratic_obstruction(d1, d2)?;
        if obstructed != ((d1, d2) != (-2, 6)) {
            return Err(certificate("unexpected obstruction", &format!("({d1}, {d2})")));
        }
    }
    let [q1, q2] = BIQUADRATIC_FACTORS.map(|c| poly_of(&c));
    let last = polys.last().expect("nonempty").to_poly();
    let classes = [&q1, &q2].map(|q| nth_power_free_part(&q.discriminant(), 2).0);
    if &q1 * &q2 != last || classes != [rat(-2), rat(6)] {
        return Err(certificate("biquadratic entry", &last.render("x")));
    }

    Ok(with_symmetries(polys, &shadow))
}

/// Sort key `(sign, v₂, v₃, |a|)`, which orders `±2^μ3^ν` lexicographically by `(sign, μ, ν)`.
fn twist_key(a: &Rat) -> (bool, i64, i64, Rat) {
    (a.is_negative(), vp(a, 2), vp(a, 3), a.abs())
}

/// Least representative of the class of `a` in `ℚ^× / (ℚ^×)⁴·Scal`.
pub fn canonical_twist(a: &Rat, scal: &[Rat]) -> Rat {
    scal.iter()
        .chain(std::iter::once(&rat(1)))
        .map(|s| fourth_power_class(&(a * s)))
        .min_by_key(twist_key)
        .expect("nonempty orbit")
}

/// A curve `x⁴ = a·g(y)` of the enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialTwist {
    pub class: usize,
    pub a: Rat,
    pub curve: SpecialShort,
}

/// The twists `x⁴ = a·g(y)` with `a = ±2^μ3^ν`, one per isomorphism class, in table order.
pub fn enumerate_special_twists_23(table: &ClassificationTable) -> Vec<SpecialTwist> {
    let scalars: Vec<Rat> = [1, -1]
        .into_iter()
        .flat_map(|s| (0..4u32).flat_map(move |m| (0..4u32).map(move |n| rat(s * 2i64.pow(m) * 3i64.pow(n)))))
        .collect();
    table
        .classes
        .par_iter()
        .map(|cl| {
            let reps: BTreeMap<_, Rat> = scalars
                .iter()
                .map(|a| {
                    let r = canonical_twist(a, &cl.scal);
                    (twist_key(&r), r)
                })
                .collect();
            reps.into_values()
                .map(|a| SpecialTwist {
                    class: cl.index,
                    curve: SpecialShort::new(rat(1), cl.poly.scale(&a)).expect("special and separable"),
                    a,
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

/// `x⁴ = y³ + 1`: Δ of the plane model is `2¹⁶3⁹` up to sign, the minimal discriminant is
/// `2⁷3⁹` and the conductor is `2⁶3⁶`.
pub fn standard_special_curve() -> SpecialShort {
    SpecialShort::new(rat(1), BinaryQuartic::from_ints([0, 1, 0, 0, 1])).expect("valid model")
}

/// Conductor exponents of the standard curve, as stored data.
pub fn standard_special_conductor() -> BTreeMap<u64, i64> {
    BTreeMap::from([(2, 6), (3, 6)])
}

/// Places where the Hilbert symbol of a biquadratic pair is −1.
pub fn obstruction_places(d1: i64, d2: i64) -> Vec<Place> {
    nontrivial_places(&rat(d1), &rat(d2))
}
