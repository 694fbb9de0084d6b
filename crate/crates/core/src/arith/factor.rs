//! Integer factorization by trial division, plus n-th-power-free parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{pow_i, rat, Rat};

/// Default trial-division bound used when callers do not supply one.
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 20;

/// Primes up to and including `bound` (sieve of Eratosthenes).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigInt::from(n))
}

/// Miller–Rabin with the first twelve prime bases; deterministic below 3.3·10²⁴.
pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        let b = BigInt::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let mut d = n1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Result of factoring a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    /// Prime factors in ascending order with exponents.
    pub primes: Vec<(BigInt, u32)>,
    /// Cofactor that could not be split (1 when the factorization is complete).
    pub unfactored: BigInt,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_one()
    }

    /// Primes that fit in a machine word.
    pub fn small_primes(&self) -> Vec<u64> {
        self.primes.iter().filter_map(|(p, _)| p.to_u64()).collect()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        let p = BigInt::from(p);
        self.primes
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Text form such as `-1 * 2^16 * 3^9`.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.sign < 0 {
            parts.push("-1".into());
        }
        for (p, e) in &self.primes {
            if *e == 1 {
                parts.push(p.to_string());
            } else {
                parts.push(format!("{p}^{e}"));
            }
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

fn push_factor(out: &mut Vec<(BigInt, u32)>, p: BigInt, e: u32) {
    if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += e;
    } else {
        out.push((p, e));
    }
}

/// Largest `k ≥ 2` with `n = r^k`, if any.
fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    let bits = n.bits() as u32;
    for k in (2..=bits.max(2)).rev() {
        let r = n.nth_root(k);
        if r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Factor `n ≠ 0` by trial division up to `bound`; a leftover cofactor is kept whole
/// when it is a probable prime (or a power of one) and reported as unfactored otherwise.
pub fn factor_int(n: &BigInt, bound: u64) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut primes = Vec::new();
    let mut p: u64 = 2;
    while p <= bound {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            primes.push((pb, e));
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    let mut unfactored = BigInt::one();
    if m > BigInt::one() {
        if is_probable_prime(&m) {
            push_factor(&mut primes, m, 1);
        } else if let Some((r, k)) = perfect_power(&m) {
            if is_probable_prime(&r) {
                push_factor(&mut primes, r, k);
            } else {
                unfactored = m;
            }
        } else {
            unfactored = m;
        }
    }
    primes.sort();
    Factorization {
        sign,
        primes,
        unfactored,
    }
}

/// Factor a nonzero rational as a signed product of prime powers (negative exponents allowed).
pub fn factor_rat(q: &Rat, bound: u64) -> (i8, Vec<(BigInt, i64)>, BigInt) {
    let fnum = factor_int(q.numer(), bound);
    let fden = factor_int(q.denom(), bound);
    let mut out: Vec<(BigInt, i64)> = fnum
        .primes
        .iter()
        .map(|(p, e)| (p.clone(), *e as i64))
        .collect();
    for (p, e) in &fden.primes {
        if let Some(slot) = out.iter_mut().find(|(q, _)| q == p) {
            slot.1 -= *e as i64;
        } else {
            out.push((p.clone(), -(*e as i64)));
        }
    }
    out.retain(|(_, e)| *e != 0);
    out.sort();
    let unf = &fnum.unfactored * &fden.unfactored;
    (fnum.sign, out, unf)
}

/// Decomposes `q = core · root^n` with `0 ≤ v_p(core) < n` for every prime.
///
/// For odd `n` the sign is moved into the root so that the core is positive exactly when
/// `q` is; for even `n` the core keeps the sign of `q`.
pub fn nth_power_free_part(q: &Rat, n: u32) -> (Rat, Rat) {
    assert!(!q.is_zero(), "zero has no power-free part");
    assert!(n >= 1);
    let (sign, factors, unf) = factor_rat(q, DEFAULT_TRIAL_BOUND);
    let mut core = rat(1);
    let mut root = rat(1);
    for (p, e) in factors {
        let pr = Rat::from_integer(p);
        let r = e.rem_euclid(n as i64);
        let k = (e - r) / n as i64;
        core *= pow_i(&pr, r);
        root *= pow_i(&pr, k);
    }
    // An unsplit cofactor is kept in the core; it is coprime to everything split off.
    core *= Rat::from_integer(unf);
    if sign < 0 {
        core = -core;
    }
    (core, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::ratio;

    #[test]
    fn small_factorizations() {
        let f = factor_int(&BigInt::from(-360), 100);
        assert_eq!(f.sign, -1);
        assert_eq!(f.render(), "-1 * 2^3 * 3^2 * 5");
        assert!(f.is_complete());
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factor_int(&big, 1000);
        assert!(!f.is_complete());
    }

    #[test]
    fn prime_cofactor_kept() {
        let n = BigInt::from(2u64) * BigInt::from(1_000_000_007u64);
        let f = factor_int(&n, 100);
        assert!(f.is_complete());
        assert_eq!(f.primes.len(), 2);
    }

    #[test]
    fn power_free_examples() {
        assert_eq!(nth_power_free_part(&rat(48), 4), (rat(3), rat(2)));
        assert_eq!(nth_power_free_part(&rat(-1), 3), (rat(-1), rat(1)));
        let q = Rat::from_integer(BigInt::from(2).pow(9) * BigInt::from(3).pow(14));
        assert_eq!(nth_power_free_part(&q, 6), (rat(8 * 9), rat(2 * 9)));
        let (c, r) = nth_power_free_part(&ratio(-5, 16), 4);
        assert_eq!(c, rat(-5));
        assert_eq!(r, ratio(1, 2));
    }

    #[test]
    fn sieve_counts() {
        assert_eq!(primes_up_to(100).len(), 25);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }
}
