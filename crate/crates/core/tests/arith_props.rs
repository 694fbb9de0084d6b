//! Property tests for the arithmetic layer.

use num_traits::{One, Zero};
use proptest::prelude::*;

use picard_core::arith::factor::nth_power_free_part;
use picard_core::arith::hilbert::relevant_places;
use picard_core::arith::rat::{rat, ratio, valuation, vp, Rat, Valuation};
use picard_core::arith::{hilbert_symbol, s_unit_classes, solve_sunit_equation, splitting_field_unramified, Place};
use picard_core::binary_forms::{disc_binary, BinaryQuartic};
use picard_core::QPoly;

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (-2000i64..=2000, 1i64..=2000)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| ratio(n, d))
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn monic_quartic() -> impl Strategy<Value = QPoly> {
    prop::array::uniform4(-12i64..=12).prop_map(|c| QPoly::from_ints(&[c[3], c[2], c[1], c[0], 1]))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn valuation_is_a_valuation(a in nonzero_rat(), b in nonzero_rat(), p in small_prime()) {
        prop_assert_eq!(vp(&(&a * &b), p), vp(&a, p) + vp(&b, p));
        let sum = &a + &b;
        if sum.is_zero() {
            prop_assert_eq!(valuation(&sum, p), Valuation::Infinity);
        } else {
            prop_assert!(vp(&sum, p) >= vp(&a, p).min(vp(&b, p)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hilbert_symbol_laws(a in nonzero_rat(), b in nonzero_rat(), c in nonzero_rat()) {
        let places = relevant_places(&a, &b);
        let product: i32 = places.iter().map(|&v| hilbert_symbol(&a, &b, v)).product();
        prop_assert_eq!(product, 1);
        for v in [Place::Infinite, Place::Finite(2), Place::Finite(3), Place::Finite(5)] {
            prop_assert_eq!(hilbert_symbol(&a, &b, v), hilbert_symbol(&b, &a, v));
            prop_assert_eq!(
                hilbert_symbol(&a, &(&b * &c), v),
                hilbert_symbol(&a, &b, v) * hilbert_symbol(&a, &c, v)
            );
        }
    }

    #[test]
    fn unramified_where_the_discriminant_is_a_unit(g in monic_quartic(), p in prop::sample::select(vec![5u64, 7, 11, 13])) {
        let d = g.discriminant();
        prop_assume!(!d.is_zero() && vp(&d, p) == 0);
        prop_assert!(splitting_field_unramified(&g, p).unwrap());
    }

    #[test]
    fn unramified_test_is_invariant_under_substitution(
        g in monic_quartic(),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        c in -5i64..=5,
        u in prop::sample::select(vec![1i64, -1, 2, 3, 5, 7, 11]),
    ) {
        prop_assume!(g.is_squarefree() && u.rem_euclid(p as i64) != 0);
        let base = splitting_field_unramified(&g, p).unwrap();
        prop_assert_eq!(splitting_field_unramified(&g.shift(&rat(c)), p).unwrap(), base);
        // u⁴·g(x/u) is again monic and integral.
        let scaled = g.affine(&ratio(1, u), &rat(0)).scale(&rat(u).pow(4));
        prop_assert_eq!(splitting_field_unramified(&scaled, p).unwrap(), base);
    }

    #[test]
    fn power_free_parts(q in nonzero_rat(), n in 2u32..=6) {
        let (core, root) = nth_power_free_part(&q, n);
        prop_assert_eq!(&core * root.pow(n as i32), q);
        for p in [2, 3, 5, 7, 11, 13] {
            let v = vp(&core, p);
            prop_assert!((0..n as i64).contains(&v));
        }
    }
}

#[test]
fn s_unit_classes_are_distinct() {
    for (s, n) in [(vec![2u64, 3], 3u32), (vec![2, 3], 6), (vec![2, 3], 9), (vec![5], 4)] {
        let set = s_unit_classes(&s, n);
        let expected = if n % 2 == 1 { n.pow(s.len() as u32) } else { 2 * n.pow(s.len() as u32) };
        assert_eq!(set.representatives.len(), expected as usize);
        for (i, a) in set.representatives.iter().enumerate() {
            for b in &set.representatives[..i] {
                assert!(!nth_power_free_part(&(a / b), n).0.is_one(), "{a} and {b} share a class mod {n}th powers");
            }
        }
    }
}

#[test]
fn s_unit_solutions_are_stable_at_bound_ten() {
    for s in [vec![2u64], vec![3], vec![2, 3]] {
        assert_eq!(solve_sunit_equation(&s, 10), solve_sunit_equation(&s, 20), "S = {s:?}");
    }
    // The 21 ordered solutions for {2, 3} fall into the orbits of 2 (size 3) and 3, 4, 9 (size 6).
    assert_eq!(solve_sunit_equation(&[2], 10), vec![rat(2)]);
    assert_eq!(solve_sunit_equation(&[2, 3], 10), [2, 3, 4, 9].map(rat).to_vec());
}

#[test]
fn quartic_discriminant_sign_convention() {
    assert_eq!(disc_binary(&BinaryQuartic::from_ints([1, 0, 0, 0, -1])), rat(-256));
    assert_eq!(disc_binary(&BinaryQuartic::from_ints([1, 0, 0, 0, 3])), rat(256 * 27));
}
