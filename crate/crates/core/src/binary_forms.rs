//! Binary quartic forms: invariants, the affine action on monic quartics, reduction at a
//! prime, the Hessian shadow, and PGL₂(ℚ)-equivalence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::nth_power_free_part;
use crate::arith::rat::{pow_i, prime_pow, rat, valuation, Rat, Valuation};
use crate::error::{PicardError, Result};
use crate::poly::QPoly;

/// Binary form of degree 4, `c₀x⁴ + c₁x³z + c₂x²z² + c₃xz³ + c₄z⁴`.
///
/// A cubic polynomial is a form with `c₀ = 0` (a root at infinity).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryQuartic {
    pub c: [Rat; 5],
}

impl BinaryQuartic {
    pub fn new(c: [Rat; 5]) -> Result<Self> {
        if c.iter().all(Zero::is_zero) {
            return Err(PicardError::Degenerate("zero binary form".into()));
        }
        Ok(BinaryQuartic { c })
    }

    pub fn from_ints(c: [i64; 5]) -> Self {
        Self::new(c.map(rat)).expect("nonzero form")
    }

    /// Homogenizes a polynomial of degree ≤ 4 to a quartic form.
    pub fn from_poly(f: &QPoly) -> Result<Self> {
        match f.degree() {
            None => Err(PicardError::Degenerate("zero polynomial".into())),
            Some(d) if d > 4 => Err(PicardError::Degenerate(format!("degree {d} exceeds 4"))),
            Some(_) => Self::new(std::array::from_fn(|i| f.coeff(4 - i))),
        }
    }

    /// Dehomogenization at z = 1.
    pub fn to_poly(&self) -> QPoly {
        QPoly::new((0..5).map(|k| self.c[4 - k].clone()).collect())
    }

    pub fn is_monic(&self) -> bool {
        self.c[0].is_one()
    }

    /// Degree of the dehomogenized polynomial.
    pub fn poly_degree(&self) -> usize {
        self.to_poly().deg()
    }

    /// Scaled so that the dehomogenized polynomial is monic.
    pub fn monic_poly(&self) -> Self {
        let lc = self.to_poly().lc();
        self.scale(&lc.recip())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        BinaryQuartic {
            c: std::array::from_fn(|i| &self.c[i] * s),
        }
    }

    pub fn eval(&self, x: &Rat, z: &Rat) -> Rat {
        (0..5).fold(Rat::zero(), |acc, i| {
            acc + &self.c[i] * pow_i(x, 4 - i as i64) * pow_i(z, i as i64)
        })
    }

    pub fn render(&self, var: &str) -> String {
        self.to_poly().render(var)
    }
}

impl fmt::Display for BinaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// The quadratic invariant `12c₀c₄ − 3c₁c₃ + c₂²`.
pub fn invariant_i(f: &BinaryQuartic) -> Rat {
    let [a, b, c, d, e] = &f.c;
    rat(12) * a * e - rat(3) * b * d + c * c
}

/// The cubic invariant `72c₀c₂c₄ + 9c₁c₂c₃ − 27c₀c₃² − 27c₄c₁² − 2c₂³`.
pub fn invariant_j(f: &BinaryQuartic) -> Rat {
    let [a, b, c, d, e] = &f.c;
    rat(72) * a * c * e + rat(9) * b * c * d
        - rat(27) * a * d * d
        - rat(27) * e * b * b
        - rat(2) * c * c * c
}

/// Discriminant `(4I³ − J²)/27`; equals `Res(f, f′)/c₀` when `c₀ ≠ 0`.
pub fn disc_binary(f: &BinaryQuartic) -> Rat {
    let i = invariant_i(f);
    let j = invariant_j(f);
    (rat(4) * &i * &i * &i - &j * &j) / rat(27)
}

/// `I³/Δ`, an absolute invariant of the ℚ̄-equivalence class of a separable form.
pub fn j_invariant(f: &BinaryQuartic) -> Result<Rat> {
    let d = disc_binary(f);
    if d.is_zero() {
        return Err(PicardError::Degenerate("form is not separable".into()));
    }
    let i = invariant_i(f);
    Ok(&i * &i * &i / d)
}

fn check_monic(f: &BinaryQuartic) -> Result<()> {
    if f.is_monic() {
        Ok(())
    } else {
        Err(PicardError::Precondition("quartic must be monic".into()))
    }
}

/// `α⁻⁴ f(αx + β)`.
pub fn act_affine(f: &BinaryQuartic, alpha: &Rat, beta: &Rat) -> Result<BinaryQuartic> {
    check_monic(f)?;
    if alpha.is_zero() {
        return Err(PicardError::Precondition("α must be nonzero".into()));
    }
    let g = f.to_poly().affine(alpha, beta).scale(&pow_i(alpha, -4));
    BinaryQuartic::from_poly(&g)
}

/// The slope datum `λ(f) = min v(cᵢ)/i` of a monic quartic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeValue {
    Finite(Rat),
    /// All lower coefficients vanish (`f = x⁴`).
    Infinite,
}

impl SlopeValue {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            SlopeValue::Finite(r) => Some(r),
            SlopeValue::Infinite => None,
        }
    }
}

pub fn lambda_slope(f: &BinaryQuartic, p: u64) -> Result<SlopeValue> {
    check_monic(f)?;
    Ok((1..5)
        .filter_map(|i| match valuation(&f.c[i], p) {
            Valuation::Finite(v) => Some(Rat::new(BigInt::from(v), BigInt::from(i))),
            Valuation::Infinity => None,
        })
        .min()
        .map_or(SlopeValue::Infinite, SlopeValue::Finite))
}

/// A 2×2 matrix acting on binary forms by `F ↦ F(αx + βz, γx + δz)`, with an optional
/// scalar ε recording `F∘A = ε·G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    pub delta: Rat,
    pub scalar: Option<Rat>,
}

impl MobiusMap {
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat, delta: Rat) -> Result<Self> {
        let m = MobiusMap {
            alpha,
            beta,
            gamma,
            delta,
            scalar: None,
        };
        if m.det().is_zero() {
            return Err(PicardError::Degenerate("singular Möbius map".into()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self::affine(rat(1), rat(0))
    }

    /// `x ↦ αx + β`.
    pub fn affine(alpha: Rat, beta: Rat) -> Self {
        MobiusMap {
            alpha,
            beta,
            gamma: rat(0),
            delta: rat(1),
            scalar: None,
        }
    }

    pub fn det(&self) -> Rat {
        &self.alpha * &self.delta - &self.beta * &self.gamma
    }

    /// Matrix product `self · other`, so that `(F∘self)∘other = F∘(self·other)`.
    pub fn compose(&self, o: &MobiusMap) -> MobiusMap {
        MobiusMap {
            alpha: &self.alpha * &o.alpha + &self.beta * &o.gamma,
            beta: &self.alpha * &o.beta + &self.beta * &o.delta,
            gamma: &self.gamma * &o.alpha + &self.delta * &o.gamma,
            delta: &self.gamma * &o.beta + &self.delta * &o.delta,
            scalar: None,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        let d = self.det();
        MobiusMap {
            alpha: &self.delta / &d,
            beta: -&self.beta / &d,
            gamma: -&self.gamma / &d,
            delta: &self.alpha / &d,
            scalar: None,
        }
    }

    /// Projective representative: first nonzero entry equal to 1.
    pub fn normalized(&self) -> MobiusMap {
        let lead = [&self.alpha, &self.beta, &self.gamma, &self.delta]
            .into_iter()
            .find(|e| !e.is_zero())
            .unwrap()
            .clone();
        MobiusMap {
            alpha: &self.alpha / &lead,
            beta: &self.beta / &lead,
            gamma: &self.gamma / &lead,
            delta: &self.delta / &lead,
            scalar: self.scalar.clone(),
        }
    }

    pub fn same_projective(&self, o: &MobiusMap) -> bool {
        let a = self.normalized();
        let b = o.normalized();
        a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma && a.delta == b.delta
    }

    /// `F∘A` for a quartic form.
    pub fn apply(&self, f: &BinaryQuartic) -> BinaryQuartic {
        let l1 = [self.alpha.clone(), self.beta.clone()];
        let l2 = [self.gamma.clone(), self.delta.clone()];
        let mut out: Vec<Rat> = vec![Rat::zero(); 5];
        for (i, ci) in f.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let term = form_mul(&form_pow(&l1, 4 - i), &form_pow(&l2, i));
            for (k, t) in term.iter().enumerate() {
                out[k] += ci * t;
            }
        }
        BinaryQuartic {
            c: std::array::from_fn(|k| out[k].clone()),
        }
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::arith::rat::fmt_rat;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            fmt_rat(&self.alpha),
            fmt_rat(&self.beta),
            fmt_rat(&self.gamma),
            fmt_rat(&self.delta)
        )
    }
}

/// Product of binary forms given as coefficient lists `x^n, x^{n-1}z, …`.
fn form_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn form_pow(a: &[Rat], e: usize) -> Vec<Rat> {
    (0..e).fold(vec![rat(1)], |acc, _| form_mul(&acc, a))
}

fn residue_is_fourth_power(f: &BinaryQuartic, p: u64) -> bool {
    let pb = BigInt::from(p);
    let red = |q: &Rat| -> BigInt {
        let n = q.numer() * q.denom().modinv(&pb).expect("p-integral");
        ((n % &pb) + &pb) % &pb
    };
    let c: Vec<BigInt> = f.c.iter().map(red).collect();
    if p == 2 {
        return c[1].is_zero() && c[2].is_zero() && c[3].is_zero();
    }
    // (x − a)⁴ with a = −c₁/4.
    let four_inv = BigInt::from(4).modinv(&pb).unwrap();
    let a = ((-&c[1] * four_inv) % &pb + &pb) % &pb;
    let binom = [1, -4, 6, -4, 1];
    (0..5).all(|i| {
        let expect = (BigInt::from(binom[i]) * a.pow(i as u32)) % &pb;
        ((expect - &c[i]) % &pb).is_zero()
    })
}

/// Lemma-style sufficient test: `0 ≤ λ < 1` and, when `λ = 0`, the reduction is not a
/// fourth power. `false` is inconclusive.
pub fn is_reduced_sufficient(f: &BinaryQuartic, p: u64) -> Result<bool> {
    let lam = match lambda_slope(f, p)? {
        SlopeValue::Infinite => return Ok(false),
        SlopeValue::Finite(l) => l,
    };
    if lam.is_negative() || lam >= rat(1) {
        return Ok(false);
    }
    if lam.is_zero() {
        return Ok(!residue_is_fourth_power(f, p));
    }
    Ok(true)
}

/// Reduces a separable monic quartic at `p`; returns the reduced quartic and the affine map
/// `x ↦ αx + β` with `output = α⁻⁴ f(αx + β)`.
pub fn reduce_quartic(f: &BinaryQuartic, p: u64) -> Result<(BinaryQuartic, MobiusMap)> {
    check_monic(f)?;
    if disc_binary(f).is_zero() {
        return Err(PicardError::Degenerate("quartic is not separable".into()));
    }
    let mut cur = f.clone();
    let mut alpha = rat(1);
    let mut beta = rat(0);
    loop {
        let lam = lambda_slope(&cur, p)?;
        let lam = lam.finite().expect("separable quartic has finite slope").clone();
        let n = lam.floor().to_integer().to_i64().expect("slope fits in i64");
        if n != 0 {
            let s = prime_pow(p, n);
            cur = act_affine(&cur, &s, &rat(0))?;
            alpha = &alpha * &s;
        }
        let lam = lambda_slope(&cur, p)?.finite().unwrap().clone();
        if lam.is_zero() && residue_is_fourth_power(&cur, p) {
            // Shift by a lift of the fourfold residue root; −c₁/4 is p-integral for odd p.
            // A shift that is not followed by a rescaling leaves v(Δ) unchanged, and the
            // input was already reduced; keep it as is.
            let a = if p == 2 { rat(1) } else { -&cur.c[1] / rat(4) };
            let shifted = act_affine(&cur, &rat(1), &a)?;
            let next = lambda_slope(&shifted, p)?.finite().unwrap().clone();
            if next < rat(1) {
                return Ok((cur, MobiusMap::affine(alpha, beta)));
            }
            cur = shifted;
            beta = &beta + &alpha * &a;
            continue;
        }
        return Ok((cur, MobiusMap::affine(alpha, beta)));
    }
}

/// Hessian covariant `G_xx G_zz − G_xz²` of the homogenized form, made monic.
pub fn hessian_shadow(g: &BinaryQuartic) -> Result<BinaryQuartic> {
    if !invariant_i(g).is_zero() {
        return Err(PicardError::Precondition("invariant I must vanish".into()));
    }
    if disc_binary(g).is_zero() {
        return Err(PicardError::Degenerate("form is not separable".into()));
    }
    let h = hessian(g);
    Ok(h.monic_poly())
}

/// The Hessian `G_xx G_zz − G_xz²` as a quartic form.
pub fn hessian(g: &BinaryQuartic) -> BinaryQuartic {
    // Second partials are quadratic forms in (x, z).
    let c = &g.c;
    let gxx = [rat(12) * &c[0], rat(6) * &c[1], rat(2) * &c[2]];
    let gzz = [rat(2) * &c[2], rat(6) * &c[3], rat(12) * &c[4]];
    let gxz = [rat(3) * &c[1], rat(4) * &c[2], rat(3) * &c[3]];
    let a = form_mul(&gxx, &gzz);
    let b = form_mul(&gxz, &gxz);
    BinaryQuartic {
        c: std::array::from_fn(|i| &a[i] - &b[i]),
    }
}

/// Weighted affine invariants `(P/8, Q/8, R/256)` (weights 2, 3, 4) of
/// `a x⁴ + b x³ + c x² + d x + e`, generic over the coefficient ring.
fn affine_seminvariants(k: &[QPoly; 5]) -> [QPoly; 3] {
    let [a, b, c, d, e] = k;
    let m = |x: &QPoly, y: &QPoly| x * y;
    let s = |x: &QPoly, n: i64| x.scale(&rat(n));
    let ac = m(a, c);
    let b2 = m(b, b);
    let p = &s(&ac, 8) - &s(&b2, 3);
    let abc = m(&m(a, b), c);
    let a2d = m(&m(a, a), d);
    let q = &(&m(&b2, b) - &s(&abc, 4)) + &s(&a2d, 8);
    let a3e = m(&m(&m(a, a), a), e);
    let a2bd = m(&m(&m(a, a), b), d);
    let ab2c = m(&m(a, &b2), c);
    let r = &(&(&s(&a3e, 256) - &s(&a2bd, 64)) + &s(&ab2c, 16)) - &s(&m(&b2, &b2), 3);
    [
        p.scale(&Rat::new(1.into(), 8.into())),
        q.scale(&Rat::new(1.into(), 8.into())),
        r.scale(&Rat::new(1.into(), 256.into())),
    ]
}

/// Coefficients (as polynomials in t, ordered x⁴ … x⁰) of `G(tx + 1, x)`.
fn moved_to_infinity(g: &BinaryQuartic) -> [QPoly; 5] {
    // (t x + 1)^{4-i} x^i; coefficient of x^k from (tx+1)^{4-i} is C(4-i, k-i) t^{k-i}.
    let mut out: [QPoly; 5] = Default::default();
    for (i, ci) in g.c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let n = 4 - i;
        for j in 0..=n {
            // x^{i+j} with coefficient C(n, j) t^j
            let deg_x = i + j;
            let coeff = ci * rat(binomial(n, j) as i64);
            let mut tp = vec![Rat::zero(); j + 1];
            tp[j] = coeff;
            out[4 - deg_x] = &out[4 - deg_x] + &QPoly::new(tp);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `N_q = [[q, 1], [1, 0]]`, sending ∞ to q (identity for q = ∞).
fn move_matrix(q: Option<&Rat>) -> MobiusMap {
    match q {
        None => MobiusMap::identity(),
        Some(q) => MobiusMap::new(q.clone(), rat(1), rat(1), rat(0)).unwrap(),
    }
}

fn rational_root(c: &Rat, n: u32) -> Vec<Rat> {
    if c.is_zero() {
        return vec![Rat::zero()];
    }
    if c.is_negative() && n % 2 == 0 {
        return Vec::new();
    }
    let num = c.numer().abs();
    let den = c.denom().clone();
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if rn.pow(n) != num || rd.pow(n) != den {
        return Vec::new();
    }
    let r = Rat::new(rn, rd);
    if n % 2 == 0 {
        vec![r.clone(), -r]
    } else if c.is_negative() {
        vec![-r]
    } else {
        vec![r]
    }
}

fn eval_coeffs(k: &[QPoly; 5], t: Option<&Rat>, g: &BinaryQuartic) -> [Rat; 5] {
    match t {
        Some(t) => std::array::from_fn(|i| k[i].eval(t)),
        None => g.c.clone(),
    }
}

/// Depressed monic data `(s, p, q, r)` of `a x⁴ + …` with `a ≠ 0`, where
/// `f(x − s) = a(x⁴ + p x² + q x + r)`.
fn depressed(c: &[Rat; 5]) -> (Rat, Rat, Rat, Rat) {
    let [a, b, cc, d, e] = c;
    let s = b / (rat(4) * a);
    let p = (rat(8) * a * cc - rat(3) * b * b) / (rat(8) * a * a);
    let q = (b * b * b - rat(4) * a * b * cc + rat(8) * a * a * d) / (rat(8) * a * a * a);
    let r = (rat(-3) * b * b * b * b + rat(256) * a * a * a * e - rat(64) * a * a * b * d
        + rat(16) * a * b * b * cc)
        / (rat(256) * a * a * a * a);
    (s, p, q, r)
}

/// Every `A ∈ PGL₂(ℚ)` (with a scalar μ) such that `G₂∘A = μ·G₁`.
pub fn equivalences(g1: &BinaryQuartic, g2: &BinaryQuartic) -> Vec<(MobiusMap, Rat)> {
    if disc_binary(g1).is_zero() || disc_binary(g2).is_zero() {
        return Vec::new();
    }
    // Base point q, not a root of G₁, moved to ∞.
    let q: Option<Rat> = if !g1.c[0].is_zero() {
        None
    } else {
        (0i64..)
            .flat_map(|n| [rat(n), rat(-n)])
            .find(|q| !g1.eval(q, &rat(1)).is_zero())
    };
    let nq = move_matrix(q.as_ref());
    let g1m = nq.apply(g1);
    let (s1, p1, q1, r1) = depressed(&g1m.c);
    let target = [p1.clone(), q1.clone(), r1.clone()];

    // Candidate images t = A(q) as rational roots of the invariant-matching conditions.
    let kt = moved_to_infinity(g2);
    let [pt, qt, rt] = affine_seminvariants(&kt);
    let cube = |x: &QPoly| &(x * x) * x;
    let sq = |x: &QPoly| x * x;
    let e1 = &cube(&pt).scale(&(&q1 * &q1)) - &sq(&qt).scale(&(&p1 * &p1 * &p1));
    let e2 = &sq(&pt).scale(&r1) - &rt.scale(&(&p1 * &p1));
    let q1_4 = pow_i(&q1, 4);
    let e3 = &sq(&sq(&qt)).scale(&(&r1 * &r1 * &r1)) - &cube(&rt).scale(&q1_4);
    let common = e1.gcd(&e2).gcd(&e3);
    let mut candidates: Vec<Option<Rat>> = Vec::new();
    if !g2.c[0].is_zero() {
        candidates.push(None);
    }
    if common.is_zero() {
        // Cannot happen for separable forms: the set of admissible t is finite.
        return Vec::new();
    }
    candidates.extend(common.rational_roots().into_iter().map(Some));

    let mut out: Vec<(MobiusMap, Rat)> = Vec::new();
    for t in candidates {
        let kc = eval_coeffs(&kt, t.as_ref(), g2);
        if kc[0].is_zero() {
            continue;
        }
        let (sk, pk, qk, rk) = depressed(&kc);
        let got = [pk, qk, rk];
        // α with got_w = α^w · target_w for weights 2, 3, 4.
        let mut ok = true;
        let mut constraints: Vec<(u32, Rat)> = Vec::new();
        for (w, (g, tg)) in [2u32, 3, 4].into_iter().zip(got.iter().zip(target.iter())) {
            match (g.is_zero(), tg.is_zero()) {
                (true, true) => {}
                (false, false) => constraints.push((w, g / tg)),
                _ => ok = false,
            }
        }
        if !ok || constraints.is_empty() {
            continue;
        }
        let (w0, v0) = constraints[0].clone();
        for alpha in rational_root(&v0, w0) {
            if alpha.is_zero() {
                continue;
            }
            if !constraints
                .iter()
                .all(|(w, v)| pow_i(&alpha, *w as i64) == *v)
            {
                continue;
            }
            let beta = &alpha * &s1 - &sk;
            let l = MobiusMap::affine(alpha.clone(), beta);
            let a = move_matrix(t.as_ref()).compose(&l).compose(&nq.inverse());
            if out.iter().any(|(m, _)| m.same_projective(&a)) {
                continue;
            }
            let mut a = a.normalized();
            if let Some(mu) = proportionality(&a.apply(g2), g1) {
                a.scalar = Some(mu.clone());
                out.push((a, mu));
            }
        }
    }
    out
}

/// μ with `a = μ·b`, if the forms are proportional.
fn proportionality(a: &BinaryQuartic, b: &BinaryQuartic) -> Option<Rat> {
    let i = (0..5).find(|&i| !b.c[i].is_zero())?;
    let mu = &a.c[i] / &b.c[i];
    (0..5)
        .all(|k| a.c[k] == &mu * &b.c[k])
        .then_some(mu)
        .filter(|m| !m.is_zero())
}

/// A witness `(A, μ)` with `G₂∘A = μ·G₁`, if the forms are PGL₂(ℚ)-equivalent up to scalar.
pub fn are_equivalent(g1: &BinaryQuartic, g2: &BinaryQuartic) -> Option<(MobiusMap, Rat)> {
    equivalences(g1, g2).into_iter().next()
}

/// All `A` with `G∘A = μ·G`, each with μ reduced to its class modulo fourth powers.
pub fn rational_symmetries(g: &BinaryQuartic) -> Vec<(MobiusMap, Rat)> {
    equivalences(g, g)
        .into_iter()
        .map(|(mut a, mu)| {
            let core = nth_power_free_part(&mu, 4).0;
            a.scalar = Some(core.clone());
            (a, core)
        })
        .collect()
}

/// Class of a nonzero rational modulo fourth powers.
pub fn fourth_power_class(mu: &Rat) -> Rat {
    nth_power_free_part(mu, 4).0
}

/// Brute-force search over matrices with small integer entries, used to cross-check
/// the algebraic search on test inputs.
pub fn equivalences_brute_force(
    g1: &BinaryQuartic,
    g2: &BinaryQuartic,
    height: i64,
) -> Vec<(MobiusMap, Rat)> {
    let mut out: Vec<(MobiusMap, Rat)> = Vec::new();
    let range = -height..=height;
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    let Ok(m) = MobiusMap::new(rat(a), rat(b), rat(c), rat(d)) else {
                        continue;
                    };
                    if let Some(mu) = proportionality(&m.apply(g2), g1) {
                        if !out.iter().any(|(x, _)| x.same_projective(&m)) {
                            out.push((m, mu));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::ratio;

    fn bq(c: [i64; 5]) -> BinaryQuartic {
        BinaryQuartic::from_ints(c)
    }

    fn res_oracle(f: &BinaryQuartic) -> Rat {
        let p = f.to_poly();
        p.resultant(&p.derivative()) / p.lc()
    }

    #[test]
    fn discriminant_examples() {
        let f = bq([1, 0, 0, 0, -1]);
        assert_eq!(disc_binary(&f), res_oracle(&f));
        assert_eq!(disc_binary(&f), rat(-256));
        assert_eq!(disc_binary(&bq([0, 1, 0, 0, 1])), rat(-27));
        // (x − z)²(x + z)(x − 2z)
        let rep = &(&QPoly::from_ints(&[-1, 1]).pow(2) * &QPoly::from_ints(&[1, 1]))
            * &QPoly::from_ints(&[-2, 1]);
        assert_eq!(disc_binary(&BinaryQuartic::from_poly(&rep).unwrap()), rat(0));
        let g = bq([3, -1, 4, 1, -5]);
        assert_eq!(disc_binary(&g), res_oracle(&g));
    }

    #[test]
    fn invariant_i_examples() {
        assert_eq!(invariant_i(&bq([1, 0, 6, 5, -3])), rat(0));
        assert_eq!(invariant_i(&bq([0, 1, 0, 0, 1])), rat(0));
        assert_eq!(invariant_i(&bq([1, 0, 0, 0, -1])), rat(-12));
    }

    #[test]
    fn affine_action() {
        let p = 7i64;
        let f = bq([1, 0, 0, 0, p.pow(5)]);
        assert_eq!(act_affine(&f, &rat(p), &rat(0)).unwrap(), bq([1, 0, 0, 0, p]));
        assert_eq!(act_affine(&f, &rat(1), &rat(0)).unwrap(), f);
        let g = BinaryQuartic::from_poly(&(&QPoly::from_ints(&[1, 1]).pow(4) + &QPoly::from_ints(&[p])))
            .unwrap();
        let h = act_affine(&g, &rat(1), &rat(-1)).unwrap();
        assert_eq!(h, bq([1, 0, 0, 0, p]));
        assert_eq!(disc_binary(&h), disc_binary(&g));
    }

    #[test]
    fn slopes() {
        let p = 5u64;
        assert_eq!(lambda_slope(&bq([1, 0, 0, 0, 5]), p).unwrap(), SlopeValue::Finite(ratio(1, 4)));
        assert_eq!(
            lambda_slope(&bq([1, 0, 0, 0, 3125]), p).unwrap(),
            SlopeValue::Finite(ratio(5, 4))
        );
        assert_eq!(
            lambda_slope(&bq([1, 5, 25, 125, 625]), p).unwrap(),
            SlopeValue::Finite(rat(1))
        );
    }

    #[test]
    fn reduction_examples() {
        let p = 7u64;
        let (r, m) = reduce_quartic(&bq([1, 0, 0, 0, 7i64.pow(5)]), p).unwrap();
        assert_eq!(r, bq([1, 0, 0, 0, 7]));
        assert_eq!(act_affine(&bq([1, 0, 0, 0, 7i64.pow(5)]), &m.alpha, &m.beta).unwrap(), r);
        let g = BinaryQuartic::from_poly(&(&QPoly::from_ints(&[1, 1]).pow(4) + &QPoly::from_ints(&[7])))
            .unwrap();
        assert_eq!(reduce_quartic(&g, p).unwrap().0, g);
        // (x − 3)⁴ + 7⁶ → x⁴ + 7²
        let h = BinaryQuartic::from_poly(
            &(&QPoly::from_ints(&[-3, 1]).pow(4) + &QPoly::from_ints(&[7i64.pow(6)])),
        )
        .unwrap();
        assert_eq!(reduce_quartic(&h, p).unwrap().0, bq([1, 0, 0, 0, 49]));
    }

    #[test]
    fn sufficient_test() {
        assert!(is_reduced_sufficient(&bq([1, 0, 0, 0, 5]), 5).unwrap());
        let g = BinaryQuartic::from_poly(&(&QPoly::from_ints(&[1, 1]).pow(4) + &QPoly::from_ints(&[5])))
            .unwrap();
        assert!(!is_reduced_sufficient(&g, 5).unwrap());
        for p in [3, 5, 7, 11] {
            assert!(is_reduced_sufficient(&bq([1, 0, 0, 0, -1]), p).unwrap());
        }
    }

    #[test]
    fn shadows() {
        assert_eq!(hessian_shadow(&bq([0, 1, 0, 0, 1])).unwrap(), bq([1, 0, 0, -8, 0]));
        let s = hessian_shadow(&bq([1, 0, 0, 2, 0])).unwrap();
        assert_eq!(s, BinaryQuartic::new([rat(0), rat(1), rat(0), rat(0), ratio(-1, 4)]).unwrap());
        assert!(are_equivalent(&s, &bq([0, 1, 0, 0, -2])).is_some());
        let g = bq([1, 0, 0, 1, 0]);
        assert!(are_equivalent(&g, &hessian_shadow(&g).unwrap()).is_some());
        assert!(hessian_shadow(&bq([1, 0, 0, 0, -1])).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let syms = rational_symmetries(&bq([1, 0, 0, 1, 0]));
        assert_eq!(syms.len(), 2);
        let nontrivial: Vec<_> = syms
            .iter()
            .filter(|(a, _)| !a.same_projective(&MobiusMap::identity()))
            .collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].1, rat(9));
        let syms = rational_symmetries(&bq([1, 0, 6, 0, -3]));
        assert_eq!(syms.len(), 2);
        assert!(syms.iter().all(|(_, mu)| *mu == rat(1)));
        assert_eq!(rational_symmetries(&bq([1, 0, 0, 3, 0])).len(), 1);
    }

    #[test]
    fn equivalence_examples() {
        assert!(are_equivalent(&bq([1, 0, 0, 2, 0]), &bq([0, 1, 0, 0, -3])).is_none());
        let g = bq([1, 0, 6, 8, -3]);
        let a = MobiusMap::new(rat(2), rat(1), rat(-1), rat(3)).unwrap();
        let h = a.apply(&g);
        let (w, mu) = are_equivalent(&g, &h).unwrap();
        assert_eq!(w.apply(&h), g.scale(&mu));
    }

    #[test]
    fn algebraic_search_matches_brute_force() {
        for g in [bq([1, 0, 0, 1, 0]), bq([1, 0, 6, 0, -3]), bq([0, 1, 0, 0, -2])] {
            let alg = equivalences(&g, &g);
            for (m, _) in equivalences_brute_force(&g, &g, 3) {
                assert!(alg.iter().any(|(a, _)| a.same_projective(&m)), "missed {m}");
            }
        }
    }
}
