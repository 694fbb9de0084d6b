//! Finite fields 𝔽_{p^k} as 𝔽_p[t]/(m(t)) with a deterministically chosen irreducible modulus,
//! and root finding for polynomials over them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Field context for 𝔽_{p^k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    pub p: u64,
    pub k: usize,
    /// Monic modulus, coefficients low → high, length k+1.
    pub modulus: Vec<u64>,
}

/// An element of 𝔽_{p^k}: coefficients of a polynomial of degree < k in the generator.
pub type Fe = Vec<u64>;

/// Polynomial over 𝔽_{p^k}, coefficients low → high, no trailing zeros.
pub type FPoly = Vec<Fe>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn modulus_cache() -> &'static Mutex<HashMap<(u64, usize), Arc<FieldCtx>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FieldCtx>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shared context for 𝔽_{p^k}; the modulus is the first irreducible monic polynomial
/// in a fixed enumeration order, so it is reproducible across runs.
pub fn field(p: u64, k: usize) -> Arc<FieldCtx> {
    assert!(k >= 1 && p >= 2);
    if let Some(ctx) = modulus_cache().lock().unwrap().get(&(p, k)) {
        return ctx.clone();
    }
    let ctx = Arc::new(FieldCtx {
        p,
        k,
        modulus: find_irreducible(p, k),
    });
    modulus_cache()
        .lock()
        .unwrap()
        .insert((p, k), ctx.clone());
    ctx
}

fn prime_field(p: u64) -> FieldCtx {
    FieldCtx {
        p,
        k: 1,
        modulus: vec![0, 1],
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test over 𝔽_p.
fn is_irreducible_fp(poly: &[u64], p: u64) -> bool {
    let f = prime_field(p);
    let k = poly.len() - 1;
    let m: FPoly = poly.iter().map(|&c| vec![c]).collect();
    let x: FPoly = vec![vec![0], vec![1]];
    let pe = BigUint::from(p);
    // x^{p^j} mod m for j = 1..k by repeated p-th powers.
    let mut powers = Vec::with_capacity(k + 1);
    let mut cur = x.clone();
    powers.push(cur.clone());
    for _ in 0..k {
        cur = f.poly_powmod(&cur, &pe, &m);
        powers.push(cur.clone());
    }
    if f.poly_sub(&powers[k], &x).iter().any(|c| c[0] != 0) {
        return false;
    }
    for r in prime_divisors(k) {
        let h = f.poly_sub(&powers[k / r], &x);
        let g = f.poly_gcd(&m, &h);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn find_irreducible(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let mut idx: u128 = 1;
    loop {
        let mut coeffs = vec![0u64; k + 1];
        coeffs[k] = 1;
        let mut n = idx;
        for c in coeffs.iter_mut().take(k) {
            *c = (n % p as u128) as u64;
            n /= p as u128;
        }
        if coeffs[0] != 0 && is_irreducible_fp(&coeffs, p) {
            return coeffs;
        }
        idx += 1;
    }
}

impl FieldCtx {
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k as u32)
    }

    pub fn zero(&self) -> Fe {
        vec![0; self.k]
    }

    pub fn one(&self) -> Fe {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn from_u64(&self, a: u64) -> Fe {
        let mut e = self.zero();
        e[0] = a % self.p;
        e
    }

    /// Element from integer coordinates (reduced mod p).
    pub fn from_coords(&self, coords: &[BigInt]) -> Fe {
        let pb = BigInt::from(self.p);
        let mut e = self.zero();
        for (i, c) in coords.iter().enumerate().take(self.k) {
            e[i] = c.mod_floor(&pb).to_u64().unwrap();
        }
        e
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| ((x as u128 + y as u128) % self.p as u128) as u64)
            .collect()
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| ((x as u128 + self.p as u128 - y as u128) % self.p as u128) as u64)
            .collect()
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p;
        let k = self.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
            }
        }
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus.iter().enumerate().take(k) {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + p - mulmod(c, m, p)) % p;
            }
        }
        prod.truncate(k);
        prod
    }

    pub fn pow(&self, a: &Fe, e: &BigUint) -> Fe {
        let mut result = self.one();
        let mut base = a.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
        }
        result
    }

    pub fn inv(&self, a: &Fe) -> Fe {
        assert!(!self.is_zero(a), "inverse of zero");
        let e = self.order() - BigUint::from(2u32);
        self.pow(a, &e)
    }

    // ---- polynomials over the field ----

    pub fn trim(&self, mut f: FPoly) -> FPoly {
        while f.last().is_some_and(|c| self.is_zero(c)) {
            f.pop();
        }
        f
    }

    pub fn poly_add(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let out = (0..n)
            .map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(out)
    }

    pub fn poly_sub(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let out = (0..n)
            .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(out)
    }

    pub fn poly_mul(&self, a: &FPoly, b: &FPoly) -> FPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.trim(out)
    }

    pub fn poly_scale(&self, a: &FPoly, s: &Fe) -> FPoly {
        self.trim(a.iter().map(|c| self.mul(c, s)).collect())
    }

    /// Division with remainder by a nonzero polynomial.
    pub fn poly_divrem(&self, a: &FPoly, b: &FPoly) -> (FPoly, FPoly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = self.trim(a.clone());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv_lc = self.inv(b.last().unwrap());
        let mut q = vec![self.zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(r.last().unwrap(), &inv_lc);
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] = self.sub(&r[shift + i], &self.mul(&c, bc));
            }
            q[shift] = c;
            r = self.trim(r);
        }
        (self.trim(q), r)
    }

    pub fn poly_rem(&self, a: &FPoly, b: &FPoly) -> FPoly {
        self.poly_divrem(a, b).1
    }

    pub fn monic(&self, a: &FPoly) -> FPoly {
        match a.last() {
            None => Vec::new(),
            Some(lc) => {
                let inv = self.inv(lc);
                self.poly_scale(a, &inv)
            }
        }
    }

    pub fn poly_gcd(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let mut a = self.trim(a.clone());
        let mut b = self.trim(b.clone());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn poly_powmod(&self, base: &FPoly, e: &BigUint, m: &FPoly) -> FPoly {
        let mut result: FPoly = vec![self.one()];
        result = self.poly_rem(&result, m);
        let mut b = self.poly_rem(base, m);
        for i in 0..e.bits() {
            if e.bit(i) {
                result = self.poly_rem(&self.poly_mul(&result, &b), m);
            }
            b = self.poly_rem(&self.poly_mul(&b, &b), m);
        }
        result
    }

    pub fn poly_eval(&self, f: &FPoly, x: &Fe) -> Fe {
        let mut acc = self.zero();
        for c in f.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Fe {
        (0..self.k).map(|_| rng.gen_range(0..self.p)).collect()
    }

    /// Splits a monic product of distinct linear factors into its roots.
    fn split_linear(&self, f: &FPoly, rng: &mut ChaCha8Rng, out: &mut Vec<Fe>) {
        let deg = f.len() - 1;
        if deg == 0 {
            return;
        }
        if deg == 1 {
            out.push(self.neg(&f[0]));
            return;
        }
        loop {
            let delta = self.random_elem(rng);
            let lin: FPoly = vec![delta.clone(), self.one()];
            let h = if self.p == 2 {
                // Absolute trace of δx: Σ (δx)^{2^i}.
                let mut t = self.poly_rem(&vec![self.zero(), delta.clone()], f);
                let mut acc = t.clone();
                for _ in 1..self.k {
                    t = self.poly_rem(&self.poly_mul(&t, &t), f);
                    acc = self.poly_add(&acc, &t);
                }
                acc
            } else {
                let e = (self.order() - 1u32) / 2u32;
                let pw = self.poly_powmod(&lin, &e, f);
                self.poly_sub(&pw, &vec![self.one()])
            };
            let g = self.poly_gcd(f, &h);
            let dg = g.len().saturating_sub(1);
            if dg > 0 && dg < deg {
                let (q, _) = self.poly_divrem(f, &g);
                self.split_linear(&g, rng, out);
                self.split_linear(&self.monic(&q), rng, out);
                return;
            }
        }
    }

    /// Distinct roots in 𝔽_{p^k} of a nonzero polynomial.
    pub fn roots(&self, f: &FPoly) -> Vec<Fe> {
        let f = self.monic(&self.trim(f.clone()));
        if f.len() <= 1 {
            return Vec::new();
        }
        let x: FPoly = vec![self.zero(), self.one()];
        let xq = self.poly_powmod(&x, &self.order(), &f);
        let g = self.poly_gcd(&f, &self.poly_sub(&xq, &x));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ self.p);
        let mut out = Vec::new();
        self.split_linear(&g, &mut rng, &mut out);
        out.sort();
        out
    }

    /// Roots in 𝔽_{p^k} with multiplicities.
    pub fn roots_with_multiplicity(&self, f: &FPoly) -> Vec<(Fe, usize)> {
        let f = self.trim(f.clone());
        self.roots(&f)
            .into_iter()
            .map(|r| {
                let lin: FPoly = vec![self.neg(&r), self.one()];
                let mut m = 0;
                let mut cur = f.clone();
                loop {
                    let (q, rem) = self.poly_divrem(&cur, &lin);
                    if !rem.is_empty() {
                        break;
                    }
                    m += 1;
                    cur = q;
                }
                (r, m)
            })
            .collect()
    }
}

/// Roots in 𝔽_p of an integer polynomial (coefficients low → high), as residues in [0, p).
pub fn roots_mod_p(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let ctx = field(p, 1);
    let f: FPoly = ctx.trim(coeffs.iter().map(|c| ctx.from_coords(&[c.clone()])).collect());
    if f.is_empty() {
        return Vec::new();
    }
    ctx.roots(&f).into_iter().map(|r| r[0]).collect()
}

/// True when the reduction mod p of an integer polynomial is squarefree of the same degree.
pub fn squarefree_mod_p(coeffs: &[BigInt], p: u64) -> bool {
    let ctx = field(p, 1);
    let f: FPoly = coeffs.iter().map(|c| ctx.from_coords(&[c.clone()])).collect();
    let f = ctx.trim(f);
    if f.len() != coeffs.len() {
        return false;
    }
    let df: FPoly = ctx.trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| ctx.mul(c, &ctx.from_u64(i as u64)))
            .collect(),
    );
    if df.is_empty() {
        return f.len() <= 1;
    }
    ctx.poly_gcd(&f, &df).len() == 1
}
