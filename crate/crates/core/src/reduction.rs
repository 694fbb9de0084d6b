//! Good and bad reduction of Picard curves over ℚ, reduced short equations, and
//! consistency checks for externally supplied conductor exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::factor::{factor_int, factor_rat, nth_power_free_part, DEFAULT_TRIAL_BOUND};
use crate::arith::rat::{ceil_div, floor_div, prime_pow, rat, vp, Rat};
use crate::arith::unramified::splitting_field_unramified;
use crate::binary_forms::{act_affine, disc_binary, fourth_power_class, reduce_quartic, BinaryQuartic};
use crate::error::{PicardError, Result};
use crate::models::{CurveKind, NonspecialShort, PicardCurve, SpecialShort};
use crate::poly::QPoly;
use crate::ternary_forms::disc_ternary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Good,
    Bad,
}

/// Which test decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReasonCode {
    /// Reduced branch quartic has unit discriminant and `v(c) = 0`.
    DiscUnit,
    /// All conditions of the special-curve criterion hold.
    CriterionPass,
    /// `v(c) ∈ {1, 2}` in the reduced equation.
    CValuation,
    /// Reduced branch quartic has non-unit discriminant.
    DiscNonUnit,
    /// `v(3) = 1` is odd over ℚ, so every Picard curve is bad at 3.
    OddThreeValuation,
    /// `v(a) ≢ 0 (mod 4)` for `x⁴ = a·g(y)`.
    AMod4,
    RamifiedSplittingField,
    /// Special curves are bad at 2 over every extension.
    WildP2Special,
}

impl ReasonCode {
    pub fn code(self) -> &'static str {
        match self {
            ReasonCode::DiscUnit => "disc-unit",
            ReasonCode::CriterionPass => "criterion-pass",
            ReasonCode::CValuation => "c-valuation",
            ReasonCode::DiscNonUnit => "disc-nonunit",
            ReasonCode::OddThreeValuation => "odd-3-valuation",
            ReasonCode::AMod4 => "a-mod-4",
            ReasonCode::RamifiedSplittingField => "ramified-splitting-field",
            ReasonCode::WildP2Special => "wild-p2-special",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReductionVerdict {
    pub p: u64,
    pub verdict: Verdict,
    pub reason: ReasonCode,
}

impl ReductionVerdict {
    fn good(p: u64, reason: ReasonCode) -> Self {
        Self { p, verdict: Verdict::Good, reason }
    }

    fn bad(p: u64, reason: ReasonCode) -> Self {
        Self { p, verdict: Verdict::Bad, reason }
    }

    pub fn is_good(&self) -> bool {
        self.verdict == Verdict::Good
    }
}

impl fmt::Display for ReductionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.is_good() { "good" } else { "bad" };
        write!(f, "{}: {v} ({})", self.p, self.reason.code())
    }
}

/// `y³ = c·f₀(x)` isomorphic to the input with `f₀` monic and reduced at `p`
/// and `0 ≤ v_p(c) ≤ 2`.
pub fn reduced_short_weierstrass(m: &NonspecialShort, p: u64) -> Result<(Rat, BinaryQuartic)> {
    if p == 3 {
        return Err(PicardError::Precondition("reduced equations need p ≠ 3".into()));
    }
    let lead = &m.f.c[0];
    let monic = m.f.scale(&lead.recip());
    let (f0, map) = reduce_quartic(&monic, p)?;
    // f(αx + β) = c₀α⁴·f₀(x); a cube of p is then absorbed into y.
    let alpha = map.alpha.clone();
    let c = lead / &m.b * num_traits::pow(alpha, 4);
    let k = floor_div(vp(&c, p), 3);
    Ok((c / prime_pow(p, 3 * k), f0))
}

pub fn has_good_reduction_nonspecial(m: &NonspecialShort, p: u64) -> Result<ReductionVerdict> {
    if p == 3 {
        return Ok(ReductionVerdict::bad(p, ReasonCode::OddThreeValuation));
    }
    let (c, f0) = reduced_short_weierstrass(m, p)?;
    Ok(if vp(&c, p) != 0 {
        ReductionVerdict::bad(p, ReasonCode::CValuation)
    } else if vp(&disc_binary(&f0), p) != 0 {
        ReductionVerdict::bad(p, ReasonCode::DiscNonUnit)
    } else {
        ReductionVerdict::good(p, ReasonCode::DiscUnit)
    })
}

/// Good reduction of the marked line `y³ = f(x)` side: the reduced quartic has unit Δ.
pub fn good_reduction_marked_line(f: &BinaryQuartic, p: u64) -> Result<bool> {
    let (g, _) = reduce_quartic(f, p)?;
    Ok(vp(&disc_binary(&g), p) == 0)
}

/// Writes a special model as `x⁴ = a·g(y)` with `g` monic and without cubic term.
/// A model with `c₀ = 0` is first moved by `z ↦ z + t·y` for the least `|t|` making `c₀ ≠ 0`.
pub fn special_a_g(m: &SpecialShort) -> (Rat, QPoly) {
    let t = if m.f.c[0].is_zero() {
        (1i64..)
            .flat_map(|t| [t, -t])
            .find(|&t| !m.f.eval(&rat(1), &rat(t)).is_zero())
            .expect("a nonzero form has a non-root")
    } else {
        0
    };
    a_g_after_shift(m, t)
}

/// As [`special_a_g`], with the shift chosen so that `g` is `p`-integral: `v_p(c₀)` is
/// the least valuation among the coefficients. Needs `p ≥ 5`.
fn special_a_g_at(m: &SpecialShort, p: u64) -> (Rat, QPoly) {
    // The primitive part has at most four roots mod p, so one of t = 0..4 is not a root.
    let t = (0i64..=4)
        .min_by_key(|&t| {
            let v = m.f.eval(&rat(1), &rat(t));
            if v.is_zero() { i64::MAX } else { vp(&v, p) }
        })
        .expect("nonempty range");
    a_g_after_shift(m, t)
}

fn a_g_after_shift(m: &SpecialShort, t: i64) -> (Rat, QPoly) {
    let mut f = m.f.clone();
    if t != 0 {
        // In u = z/y the form is y⁴·Σ cᵢuⁱ, and z ↦ z + t·y is u ↦ u + t.
        let shifted = QPoly::new(f.c.to_vec()).shift(&rat(t));
        f = BinaryQuartic::new(std::array::from_fn(|i| shifted.coeff(i))).expect("nonzero");
    }
    let a = &f.c[0] / &m.b;
    let g = QPoly::new((0..5).rev().map(|i| &f.c[i] / &f.c[0]).collect());
    let g = g.shift(&(-g.coeff(3) / rat(4)));
    (a, g)
}

pub fn has_good_reduction_special(m: &SpecialShort, p: u64) -> Result<ReductionVerdict> {
    match p {
        2 => return Ok(ReductionVerdict::bad(p, ReasonCode::WildP2Special)),
        3 => return Ok(ReductionVerdict::bad(p, ReasonCode::OddThreeValuation)),
        _ => {}
    }
    let (a, g) = special_a_g_at(m, p);
    if vp(&a, p).rem_euclid(4) != 0 {
        return Ok(ReductionVerdict::bad(p, ReasonCode::AMod4));
    }
    if !splitting_field_unramified(&g, p)? {
        return Ok(ReductionVerdict::bad(p, ReasonCode::RamifiedSplittingField));
    }
    Ok(ReductionVerdict::good(p, ReasonCode::CriterionPass))
}

/// Verdict for any model shape.
pub fn has_good_reduction(c: &PicardCurve, p: u64) -> Result<ReductionVerdict> {
    if c.kind == CurveKind::Special && p == 2 {
        return Ok(ReductionVerdict::bad(p, ReasonCode::WildP2Special));
    }
    if let Some(m) = c.model.nonspecial_short() {
        return has_good_reduction_nonspecial(&m, p);
    }
    let m = c
        .model
        .special_short()
        .ok_or_else(|| PicardError::Computation("no short model".into()))?;
    has_good_reduction_special(&m, p)
}

/// Primes dividing Δ of the primitive integral form, together with 3 (and 2 for special curves).
pub fn candidate_primes(c: &PicardCurve) -> Result<Vec<u64>> {
    let (prim, _) = c.model.to_form().primitive();
    let disc = disc_ternary(&prim)?;
    let fac = factor_int(&disc.to_integer(), DEFAULT_TRIAL_BOUND);
    if !fac.is_complete() || fac.primes.iter().any(|(q, _)| q.to_u64().is_none()) {
        return Err(PicardError::Computation(format!("could not factor Δ = {disc}")));
    }
    let mut ps = fac.small_primes();
    ps.push(3);
    if c.kind == CurveKind::Special {
        ps.push(2);
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

pub fn bad_primes(c: &PicardCurve) -> Result<Vec<u64>> {
    let verdicts: Vec<ReductionVerdict> = candidate_primes(c)?
        .par_iter()
        .map(|&p| has_good_reduction(c, p))
        .collect::<Result<_>>()?;
    Ok(verdicts.into_iter().filter(|v| !v.is_good()).map(|v| v.p).collect())
}

/// `f₃` of `x⁴ = a·g(y)` with `g = y⁴ + 6by² + 3c′y − 3b²`, `3 ∤ b` and `0 ≤ v₃(a) ≤ 3`.
pub fn special_f3_family(a: &Rat, g: &QPoly) -> Result<u32> {
    let shape = || PicardError::Precondition(format!("{} is not y⁴ + 6by² + 3c′y − 3b²", g.render("y")));
    if g.degree() != Some(4) || !g.lc().is_one() || !g.coeff(3).is_zero() {
        return Err(shape());
    }
    let b = g.coeff(2) / rat(6);
    if !b.is_integer() || !(g.coeff(1) / rat(3)).is_integer() || g.coeff(0) != rat(-3) * &b * &b {
        return Err(shape());
    }
    if vp(&b, 3) != 0 {
        return Err(PicardError::Precondition("3 divides b".into()));
    }
    match vp(a, 3) {
        1 | 2 => Ok(4),
        0 | 3 => Ok(6),
        _ => Err(PicardError::Precondition("normalize a so that 0 ≤ v₃(a) ≤ 3".into())),
    }
}

/// Conductor exponents supplied from outside, with what is known about the curve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConductorData {
    pub special: bool,
    pub exponents: BTreeMap<u64, i64>,
    /// Optional splitting `f = ε + δ` into tame and wild parts.
    pub splits: BTreeMap<u64, (i64, i64)>,
    pub bad_primes: Option<Vec<u64>>,
    /// Exponents of the minimal discriminant.
    pub min_disc: BTreeMap<u64, i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Negative,
    GoodPrimeNonzero,
    BadSpecialPrimeZero,
    ThreeAtLeastFour,
    SpecialTwoAtLeastSix,
    SpecialTameSet,
    SpecialFloor,
    SplitSum,
    SplitRange,
    SpecialEpsilonThree,
    SpecialTameSplit,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::Negative => "negative",
            Rule::GoodPrimeNonzero => "good-prime-nonzero",
            Rule::BadSpecialPrimeZero => "bad-special-prime-zero",
            Rule::ThreeAtLeastFour => "f3-at-least-4",
            Rule::SpecialTwoAtLeastSix => "special-f2-at-least-6",
            Rule::SpecialTameSet => "special-fp-in-0-4-6",
            Rule::SpecialFloor => "special-conductor-floor",
            Rule::SplitSum => "split-sum",
            Rule::SplitRange => "split-range",
            Rule::SpecialEpsilonThree => "special-epsilon3-in-4-6",
            Rule::SpecialTameSplit => "special-tame-delta-zero",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub p: Option<u64>,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p {
            Some(p) => write!(f, "p={p} {}: {}", self.rule.code(), self.detail),
            None => write!(f, "{}: {}", self.rule.code(), self.detail),
        }
    }
}

/// Checks supplied exponents against the proven bounds. An empty list means consistent.
///
/// `f₃ = 5` is allowed: it occurs with `(ε, δ) = (4, 1)`, so `f₃ ≤ 6` does not force a tame
/// splitting.
pub fn validate_conductor_exponents(d: &ConductorData) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut flag = |p: Option<u64>, rule: Rule, detail: String| out.push(Violation { p, rule, detail });
    for (&p, &f) in &d.exponents {
        if f < 0 {
            flag(Some(p), Rule::Negative, format!("f = {f}"));
            continue;
        }
        if let Some(bad) = &d.bad_primes {
            let is_bad = bad.contains(&p);
            if !is_bad && f != 0 {
                flag(Some(p), Rule::GoodPrimeNonzero, format!("good prime with f = {f}"));
            }
            if is_bad && d.special && p >= 5 && f == 0 {
                flag(Some(p), Rule::BadSpecialPrimeZero, "special curve bad at p ≥ 5 needs f > 0".into());
            }
        }
        if p == 3 && f < 4 {
            flag(Some(p), Rule::ThreeAtLeastFour, format!("f₃ = {f} < 4"));
        }
        if d.special && p == 2 && f < 6 {
            flag(Some(p), Rule::SpecialTwoAtLeastSix, format!("f₂ = {f} < 6"));
        }
        if d.special && p >= 5 && ![0, 4, 6].contains(&f) {
            flag(Some(p), Rule::SpecialTameSet, format!("f = {f} ∉ {{0, 4, 6}}"));
        }
    }
    for (&p, &(eps, delta)) in &d.splits {
        if let Some(&f) = d.exponents.get(&p) {
            if eps + delta != f {
                flag(Some(p), Rule::SplitSum, format!("ε + δ = {} ≠ f = {f}", eps + delta));
            }
        }
        if !(0..=6).contains(&eps) || delta < 0 {
            flag(Some(p), Rule::SplitRange, format!("(ε, δ) = ({eps}, {delta})"));
        }
        if d.special && p == 3 && eps != 4 && eps != 6 {
            flag(Some(p), Rule::SpecialEpsilonThree, format!("ε = {eps}"));
        }
        if d.special && p >= 5 && delta != 0 {
            flag(Some(p), Rule::SpecialTameSplit, format!("δ = {delta}"));
        }
    }
    if d.special {
        let needed: Vec<u64> = match &d.bad_primes {
            Some(bad) => bad.clone(),
            None => vec![2, 3],
        };
        if needed.iter().all(|p| d.exponents.contains_key(p)) {
            let n = conductor(&d.exponents);
            let floor = BigInt::from(2u32).pow(6) * BigInt::from(3u32).pow(6);
            if n < floor {
                flag(None, Rule::SpecialFloor, format!("N = {n} < 2^6·3^6"));
            }
        }
    }
    out
}

/// `∏ p^f_p` over the supplied exponents (negative ones skipped).
pub fn conductor(exponents: &BTreeMap<u64, i64>) -> BigInt {
    exponents
        .iter()
        .filter(|(_, &f)| f > 0)
        .map(|(&p, &f)| BigInt::from(p).pow(f as u32))
        .product()
}

/// `(p, f_p ≤ v_p(Δ^min))` for primes where both are known. Conjectural at 2 and 3.
pub fn discriminant_bound_flags(d: &ConductorData) -> Vec<(u64, bool)> {
    d.exponents
        .iter()
        .filter_map(|(p, f)| d.min_disc.get(p).map(|v| (*p, f <= v)))
        .collect()
}

fn support(qs: &[&Rat]) -> Result<Vec<u64>> {
    let mut ps = Vec::new();
    for q in qs.iter().filter(|q| !q.is_zero()) {
        let (_, fs, unf) = factor_rat(q, DEFAULT_TRIAL_BOUND);
        if !unf.is_one() {
            return Err(PicardError::Computation(format!("could not factor {q}")));
        }
        ps.extend(fs.iter().filter_map(|(p, _)| p.to_u64()));
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

/// Global reduced equation `y³ = c·f₀(x)`: `f₀` monic, integral and reduced at every prime,
/// `c` a positive cube-free integer.
pub fn reduced_equation(m: &NonspecialShort) -> Result<(Rat, BinaryQuartic)> {
    let lead = &m.f.c[0];
    let mut f = m.f.scale(&lead.recip());
    let mut c = lead / &m.b;
    let mut coeffs: Vec<&Rat> = f.c.iter().collect();
    let d = disc_binary(&f);
    coeffs.push(&d);
    for p in support(&coeffs)? {
        let (g, map) = reduce_quartic(&f, p)?;
        c *= num_traits::pow(map.alpha.clone(), 4);
        // Replace the shift by one in ℤ[1/p] congruent modulo α·p, so that integrality at the
        // primes already handled survives.
        let lifted = lift_to_p_power_denominator(&map.beta, &map.alpha, p);
        f = act_affine(&g, &rat(1), &((lifted - &map.beta) / &map.alpha))?;
    }
    Ok((nth_power_free_part(&c, 3).0.abs(), f))
}

/// Some `β′ ∈ ℤ[1/p]` with `β′ ≡ β` modulo `α·p·ℤ_p`, for `α` a power of `p`.
fn lift_to_p_power_denominator(beta: &Rat, alpha: &Rat, p: u64) -> Rat {
    if beta.is_zero() {
        return Rat::zero();
    }
    let n = vp(alpha, p) + 1;
    let s = (-vp(beta, p)).max(-n).max(0);
    let scaled = beta * prime_pow(p, s);
    let modulus = BigInt::from(p).pow((n + s) as u32);
    let t = scaled.numer() * scaled.denom().modinv(&modulus).expect("p-integral");
    let t = ((t % &modulus) + &modulus) % &modulus;
    Rat::from_integer(t) / prime_pow(p, s)
}

/// Special reduced equation `x⁴ = a·(y⁴ + 6by² + cy − 3b²)` as `(a, b, c)`: `a` fourth-power
/// free, `b, c` integers with no common scaling `(b/s², c/s³)` left integral, and `c ≥ 0`.
pub fn reduced_special_equation(m: &SpecialShort) -> Result<(Rat, Rat, Rat)> {
    let (a, g) = special_a_g(m);
    let (b, c) = (g.coeff(2) / rat(6), g.coeff(1));
    let mut s = rat(1);
    for p in support(&[&b, &c])? {
        let need = |q: &Rat, w: i64| if q.is_zero() { i64::MIN } else { ceil_div(-vp(q, p), w) };
        s *= prime_pow(p, need(&b, 2).max(need(&c, 3)));
    }
    let b = b * &s * &s;
    let c = c * &s * &s * &s;
    Ok((fourth_power_class(&a), b, c.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PicardModel;

    fn nonspecial(s: &str) -> NonspecialShort {
        PicardCurve::parse(s).unwrap().model.nonspecial_short().unwrap()
    }

    fn special(b: i64, c: [i64; 5]) -> SpecialShort {
        SpecialShort::new(rat(b), BinaryQuartic::from_ints(c)).unwrap()
    }

    #[test]
    fn reduced_equations() {
        let m = nonspecial("y^3 = 7*(x^4 - 9*x^2 - 10*x - 9)");
        let (c, f0) = reduced_short_weierstrass(&m, 7).unwrap();
        assert_eq!(c, rat(7));
        assert_eq!(f0, BinaryQuartic::from_ints([1, 0, -9, -10, -9]));

        let m = nonspecial("y^3 = 125*(x^4 + 1)");
        let (c, f0) = reduced_short_weierstrass(&m, 5).unwrap();
        assert_eq!((c, f0), (rat(1), BinaryQuartic::from_ints([1, 0, 0, 0, 1])));

        // x ↦ 5x turns x⁴ + 5⁵ into 5⁴(x⁴ + 5); only 5³ can be absorbed into y.
        let m = nonspecial("y^3 = x^4 + 3125");
        let (c, f0) = reduced_short_weierstrass(&m, 5).unwrap();
        assert_eq!((c, f0), (rat(5), BinaryQuartic::from_ints([1, 0, 0, 0, 5])));
        assert!(reduced_short_weierstrass(&m, 3).is_err());
    }

    #[test]
    fn nonspecial_verdicts() {
        let m = nonspecial("y^3 = x^4 - 1");
        assert_eq!(has_good_reduction_nonspecial(&m, 5).unwrap().reason, ReasonCode::DiscUnit);
        assert_eq!(has_good_reduction_nonspecial(&m, 3).unwrap().reason, ReasonCode::OddThreeValuation);
        let m = nonspecial("y^3 = 7*(x^4 - 9*x^2 - 10*x - 9)");
        let v = has_good_reduction_nonspecial(&m, 7).unwrap();
        assert_eq!((v.verdict, v.reason), (Verdict::Bad, ReasonCode::CValuation));
    }

    #[test]
    fn marked_line() {
        let q = |c| BinaryQuartic::from_ints(c);
        assert!(!good_reduction_marked_line(&q([1, 0, 0, 0, 7]), 7).unwrap());
        // (x+1)⁴ + 7
        assert!(!good_reduction_marked_line(&q([1, 4, 6, 4, 8]), 7).unwrap());
        assert!(good_reduction_marked_line(&q([1, 0, 0, 0, -1]), 7).unwrap());
    }

    #[test]
    fn special_verdicts() {
        let m = special(1, [12, 0, 72, 0, -36]);
        assert!(has_good_reduction_special(&m, 5).unwrap().is_good());
        assert_eq!(has_good_reduction_special(&m, 2).unwrap().reason, ReasonCode::WildP2Special);
        let m = special(1, [5, 0, 30, 0, -15]);
        assert_eq!(has_good_reduction_special(&m, 5).unwrap().reason, ReasonCode::AMod4);
        // x⁴ = y³ + 1 has c₀ = 0.
        let m = special(1, [0, 1, 0, 0, 1]);
        assert!(has_good_reduction_special(&m, 7).unwrap().is_good());
        let (a, g) = special_a_g(&m);
        assert!(!a.is_zero() && g.coeff(3).is_zero() && g.lc().is_one());
        // The first shift of x⁴ = y³ − 6 gives c₀ = −5, which is no reason to be bad at 5.
        let m = special(1, [0, 1, 0, 0, -6]);
        assert_eq!(special_a_g(&m).0, rat(-5));
        assert!(has_good_reduction_special(&m, 5).unwrap().is_good());
        let m = special(1, [0, 5, 0, 0, -30]);
        assert_eq!(has_good_reduction_special(&m, 5).unwrap().reason, ReasonCode::AMod4);
    }

    #[test]
    fn bad_prime_sets() {
        assert_eq!(bad_primes(&PicardCurve::parse("y^3 = x^4 - 1").unwrap()).unwrap(), [2, 3]);
        assert_eq!(bad_primes(&PicardCurve::parse("x^4 = y^3 + 1").unwrap()).unwrap(), [2, 3]);
        let c = PicardCurve::new(PicardModel::SpecialShort(special(1, [12, 0, 72, 0, -36]))).unwrap();
        assert_eq!(bad_primes(&c).unwrap(), [2, 3]);
        let c = PicardCurve::parse("y^3 = 7*(x^4 - 9*x^2 - 10*x - 9)").unwrap();
        assert!(bad_primes(&c).unwrap().contains(&7));
    }

    #[test]
    fn f3_family() {
        let g = QPoly::from_ints(&[-3, 0, 6, 0, 1]);
        assert_eq!(special_f3_family(&rat(12), &g).unwrap(), 4);
        assert_eq!(special_f3_family(&rat(1), &g).unwrap(), 6);
        assert_eq!(special_f3_family(&rat(18), &g).unwrap(), 4);
        assert_eq!(special_f3_family(&rat(27), &g).unwrap(), 6);
        assert!(special_f3_family(&rat(81), &g).is_err());
        assert!(special_f3_family(&rat(1), &QPoly::from_ints(&[-27, 0, 18, 0, 1])).is_err());
    }

    fn data(special: bool, exps: &[(u64, i64)]) -> ConductorData {
        ConductorData {
            special,
            exponents: exps.iter().copied().collect(),
            ..Default::default()
        }
    }

    #[test]
    fn conductor_rules() {
        let std = data(true, &[(2, 6), (3, 6)]);
        assert!(validate_conductor_exponents(&std).is_empty());
        assert_eq!(conductor(&std.exponents), BigInt::from(46656));
        let rules = |d: &ConductorData| validate_conductor_exponents(d).iter().map(|v| v.rule).collect::<Vec<_>>();
        assert_eq!(rules(&data(true, &[(2, 4), (3, 6)])), [Rule::SpecialTwoAtLeastSix, Rule::SpecialFloor]);
        assert_eq!(rules(&data(true, &[(2, 6), (3, 3)])), [Rule::ThreeAtLeastFour, Rule::SpecialFloor]);
        assert_eq!(rules(&data(true, &[(2, 6), (3, 6), (5, 5)])), [Rule::SpecialTameSet]);
        assert!(rules(&data(true, &[(2, 12), (3, 4)])).is_empty());
        assert_eq!(rules(&data(false, &[(3, 3)])), [Rule::ThreeAtLeastFour]);
        let mut erratum = data(false, &[(3, 5)]);
        erratum.splits.insert(3, (4, 1));
        assert!(rules(&erratum).is_empty());
    }
    #[test]
    fn global_reduced_equations() {
        // 7·(x⁴ − 9x² − 10x − 9) is already reduced at 7; 1/8 is a cube.
        let m = NonspecialShort::from_ints(8, [7, 0, -63, -70, -63]).unwrap();
        let (c, f) = reduced_equation(&m).unwrap();
        assert_eq!(c, rat(7));
        assert_eq!(f, BinaryQuartic::from_ints([1, 0, -9, -10, -9]));
        // x ↦ 5x turns 5⁴(x⁴ + 5) into the monic reduced quartic; 5⁴ = 5·5³.
        let m = NonspecialShort::from_ints(1, [1, 0, 0, 0, 3125]).unwrap();
        assert_eq!(reduced_equation(&m).unwrap(), (rat(5), BinaryQuartic::from_ints([1, 0, 0, 0, 5])));
        // Denominators are cleared by the scaling.
        let m = NonspecialShort::new(rat(1), BinaryQuartic::new([rat(1), rat(0), rat(0), rat(0), crate::arith::rat::ratio(1, 16)]).unwrap()).unwrap();
        let (c, f) = reduced_equation(&m).unwrap();
        assert_eq!((c, f), (rat(4), BinaryQuartic::from_ints([1, 0, 0, 0, 1])));

        let s = SpecialShort::new(rat(1), BinaryQuartic::from_ints([0, 1, 0, 0, 1])).unwrap();
        // A cubic branch polynomial is moved off infinity first; check the result by isomorphism.
        let (a, b, c) = reduced_special_equation(&s).unwrap();
        let g = crate::special_class::SpecialPolynomial::new(b, c).unwrap().to_quartic();
        let back = SpecialShort::new(rat(1), g.scale(&a)).unwrap();
        assert!(crate::invariants::is_isomorphic_special(&s, &back));
        // 16·x⁴ = 3·(y⁴ + 24y² − 16y − 48) rescales to b = 1, c = 2 and a = 3.
        let s = SpecialShort::new(rat(16), BinaryQuartic::from_ints([3, 0, 72, -48, -144])).unwrap();
        assert_eq!(reduced_special_equation(&s).unwrap(), (rat(3), rat(1), rat(2)));
    }
}
