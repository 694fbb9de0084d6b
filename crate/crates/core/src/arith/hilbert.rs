//! Local Hilbert symbols over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{vp_int, Rat};

/// A place of ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinite,
}

/// Squarefree-class integer representative of a nonzero rational (same square class).
fn integral_rep(q: &Rat) -> BigInt {
    q.numer() * q.denom()
}

fn split_p(n: &BigInt, p: u64) -> (i64, BigInt) {
    let v = vp_int(n, p);
    let pb = BigInt::from(p);
    (v, n / pb.pow(v as u32))
}

/// Legendre symbol (a/p) for odd prime p and a coprime to p.
fn legendre(a: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    let e = (&pb - 1u32) / 2u32;
    if a.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

fn mod8(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(8)).to_u64().unwrap()
}

/// ε(u) = (u−1)/2 mod 2, ω(u) = (u²−1)/8 mod 2 for odd u.
fn eps(u: &BigInt) -> u64 {
    ((mod8(u) + 7) % 8 / 2) % 2
}

fn omega(u: &BigInt) -> u64 {
    let r = mod8(u);
    ((r * r - 1) / 8) % 2
}

/// The local Hilbert symbol (a, b)_v ∈ {+1, −1}.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol needs nonzero entries");
    let a = integral_rep(a);
    let b = integral_rep(b);
    match place {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => {
            let (alpha, u) = split_p(&a, 2);
            let (beta, v) = split_p(&b, 2);
            let e = eps(&u) * eps(&v) + (alpha.rem_euclid(2) as u64) * omega(&v)
                + (beta.rem_euclid(2) as u64) * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            let (alpha, u) = split_p(&a, p);
            let (beta, v) = split_p(&b, p);
            let mut s = 1;
            if (alpha * beta).rem_euclid(2) == 1 && (p % 4 == 3) {
                s = -s;
            }
            if beta.rem_euclid(2) == 1 {
                s *= legendre(&u, p);
            }
            if alpha.rem_euclid(2) == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    }
}

/// Places where a symbol can be nontrivial: ∞, 2, and the odd primes dividing `ab`.
pub fn relevant_places(a: &Rat, b: &Rat) -> Vec<Place> {
    let mut places = vec![Place::Infinite, Place::Finite(2)];
    let n = (integral_rep(a) * integral_rep(b)).abs();
    let f = super::factor::factor_int(&n, super::factor::DEFAULT_TRIAL_BOUND);
    for p in f.small_primes() {
        if p != 2 {
            places.push(Place::Finite(p));
        }
    }
    places
}

/// Places where `(a, b)_v = −1`; empty exactly when the class is trivial in Br(ℚ).
pub fn nontrivial_places(a: &Rat, b: &Rat) -> Vec<Place> {
    relevant_places(a, b)
        .into_iter()
        .filter(|&v| hilbert_symbol(a, b, v) == -1)
        .collect()
}
