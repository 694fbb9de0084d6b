//! S-unit class groups and the rational S-unit equation λ + μ = 1.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rat::{pow_i, rat, valuation, Rat};

/// Representatives ±∏ p^{e_p}, 0 ≤ e_p < n, of the subgroup of ℚ^×/(ℚ^×)^n generated by −1 and S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SUnitClassSet {
    pub primes: Vec<u64>,
    pub exponent: u32,
    pub representatives: Vec<Rat>,
}

/// Enumerates the classes `±∏ p^{e_p}` with `0 ≤ e_p < n`.
///
/// For odd `n` the class of −1 is trivial (−1 = (−1)^n), so only positive representatives are
/// kept and the set has `n^|S|` elements; for even `n` it has `2·n^|S|`.
pub fn s_unit_classes(primes: &[u64], n: u32) -> SUnitClassSet {
    assert!(n >= 1);
    let mut s: Vec<u64> = primes.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut reps = vec![rat(1)];
    for &p in &s {
        let pr = rat(p as i64);
        let mut next = Vec::with_capacity(reps.len() * n as usize);
        for r in &reps {
            for e in 0..n {
                next.push(r * pow_i(&pr, e as i64));
            }
        }
        reps = next;
    }
    if n % 2 == 0 {
        let neg: Vec<Rat> = reps.iter().map(|r| -r).collect();
        reps.extend(neg);
    }
    reps.sort();
    SUnitClassSet {
        primes: s,
        exponent: n,
        representatives: reps,
    }
}

/// True when `q` is an S-unit whose exponents are bounded by `bound` in absolute value.
pub fn is_bounded_s_unit(q: &Rat, primes: &[u64], bound: u32) -> bool {
    if q.is_zero() {
        return false;
    }
    let mut num = q.numer().abs();
    let mut den = q.denom().clone();
    for &p in primes {
        let pb = BigInt::from(p);
        for part in [&mut num, &mut den] {
            let mut e = 0u32;
            while (&*part % &pb).is_zero() {
                *part /= &pb;
                e += 1;
            }
            if e > bound {
                return false;
            }
        }
    }
    num.is_one() && den.is_one()
}

/// The six images of λ under the anharmonic group.
pub fn anharmonic_orbit(l: &Rat) -> [Rat; 6] {
    let one = rat(1);
    let inv = l.recip();
    [
        l.clone(),
        &one - l,
        inv.clone(),
        &one - &inv,
        (&one - l).recip(),
        l / (l - &one),
    ]
}

/// Canonical orbit representative: the unique orbit element in [2, ∞).
pub fn canonical_lambda(l: &Rat) -> Rat {
    let two = rat(2);
    anharmonic_orbit(l)
        .into_iter()
        .filter(|x| *x >= two)
        .min()
        .expect("every real anharmonic orbit meets [2, ∞)")
}

/// Every λ (not deduplicated) with λ and 1−λ both S-units with exponents at most `bound`.
pub fn sunit_lambdas(primes: &[u64], bound: u32) -> Vec<Rat> {
    let mut s: Vec<u64> = primes.to_vec();
    s.sort_unstable();
    s.dedup();
    let b = bound as i64;
    let mut candidates = vec![rat(1)];
    for &p in &s {
        let pr = rat(p as i64);
        let mut next = Vec::new();
        for c in &candidates {
            for e in -b..=b {
                next.push(c * pow_i(&pr, e));
            }
        }
        candidates = next;
    }
    let one = rat(1);
    let mut out = BTreeSet::new();
    for c in candidates {
        for l in [c.clone(), -c] {
            if l == one {
                continue;
            }
            if is_bounded_s_unit(&(&one - &l), &s, bound) {
                out.insert(l);
            }
        }
    }
    out.into_iter().collect()
}

/// Solutions of λ + μ = 1 in bounded S-units, one representative per anharmonic orbit, sorted.
pub fn solve_sunit_equation(primes: &[u64], bound: u32) -> Vec<Rat> {
    let reps: BTreeSet<Rat> = sunit_lambdas(primes, bound)
        .iter()
        .map(canonical_lambda)
        .collect();
    reps.into_iter().collect()
}

/// True when `q` has valuation zero at every prime outside `primes` (unbounded exponents).
pub fn is_s_unit(q: &Rat, primes: &[u64]) -> bool {
    if q.is_zero() {
        return false;
    }
    let mut num = q.numer().abs();
    let mut den = q.denom().clone();
    for &p in primes {
        let pb = BigInt::from(p);
        for part in [&mut num, &mut den] {
            while (&*part % &pb).is_zero() {
                *part /= &pb;
            }
        }
    }
    num.is_one() && den.is_one()
}

/// Exponent vector of an S-unit, in the order of `primes`.
pub fn s_unit_exponents(q: &Rat, primes: &[u64]) -> Vec<i64> {
    primes
        .iter()
        .map(|&p| valuation(q, p).finite().unwrap_or(0))
        .collect()
}
