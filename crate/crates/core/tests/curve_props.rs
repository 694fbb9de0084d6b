//! Property tests for models, reduction, invariants and the special classification.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use picard_core::arith::rat::{is_integral, rat, ratio, vp, Rat};
use picard_core::binary_forms::{disc_binary, invariant_i, BinaryQuartic};
use picard_core::invariants::{
    automorphism_type, is_isomorphic_q, is_isomorphic_special, normalize_weighted_point, normalized_point,
    qbar_class, twist, twists_with_good_reduction_outside, weighted_point,
};
use picard_core::models::{
    minimize_at_prime, normalize_point_tangent, NonspecialShort, PicardCurve, PicardModel, SpecialShort,
};
use picard_core::reduction::{
    bad_primes, has_good_reduction, has_good_reduction_nonspecial, reduced_equation, special_f3_family,
};
use picard_core::special_class::{special_poly_discriminant, ClassificationTable, SpecialPolynomial};
use picard_core::ternary_forms::{disc_ternary, LinearChange3};
use picard_core::QPoly;

fn nonspecial_model() -> impl Strategy<Value = NonspecialShort> {
    (prop::sample::select(vec![1i64, 2, 3, 4, 6]), 1i64..=3, prop::array::uniform4(-6i64..=6))
        .prop_filter_map("smooth and nonspecial", |(b, c0, c)| {
            let m = NonspecialShort::from_ints(b, [c0, c[0], c[1], c[2], c[3]]).ok()?;
            let curve = PicardCurve::new(PicardModel::NonspecialShort(m.clone())).ok()?;
            (!curve.is_special()).then_some(m)
        })
}

fn curve(m: &NonspecialShort) -> PicardCurve {
    PicardCurve::new(PicardModel::NonspecialShort(m.clone())).unwrap()
}

fn nu() -> impl Strategy<Value = Rat> {
    (prop::sample::select(vec![1i64, -1, 2, -2, 3, 5, 6, 10]), prop::sample::select(vec![1i64, 2, 3, 7]))
        .prop_map(|(n, d)| ratio(n, d))
}

fn form_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn scaled(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn conversions_preserve_the_weighted_point(
        m in nonspecial_model(),
        (a, b) in (-3i64..=3, -3i64..=3),
        alpha in prop::sample::select(vec![1i64, -1, 2, 3]),
        beta in -2i64..=2,
    ) {
        // y ↦ y + a·x + b·z and x ↦ α·x + β·z.
        let t = LinearChange3::from_ints([[1, a, b], [0, alpha, beta], [0, 0, 1]]).unwrap();
        let form = m.to_form().transform(&t);
        let model = PicardModel::recognize(&form).unwrap();
        if let PicardModel::NonspecialLong(l) = &model {
            prop_assert_eq!(form_mul(&l.a1, &l.a1), scaled(&l.a2, &(rat(3) * &l.a0)));
        }
        let short = model.nonspecial_short().unwrap();
        prop_assert_eq!(normalized_point(&short).unwrap(), normalized_point(&m).unwrap());
    }

    #[test]
    fn special_long_models(i in 0usize..26, a in prop::sample::select(vec![1i64, -1, 2, 3, -6]), (s, u) in (-3i64..=3, -3i64..=3)) {
        let table = ClassificationTable::embedded();
        // Cubic entries have a rational flex at infinity and are recognized in nonspecial form.
        prop_assume!(!table.classes[i].poly.c[0].is_zero());
        let short = SpecialShort::new(rat(1), table.classes[i].poly.scale(&rat(a))).unwrap();
        // x ↦ x + s·y + u·z.
        let t = LinearChange3::from_ints([[1, 0, 0], [s, 1, u], [0, 0, 1]]).unwrap();
        let model = PicardModel::recognize(&short.to_form().transform(&t)).unwrap();
        if let PicardModel::SpecialLong(l) = &model {
            prop_assert_eq!(scaled(&l.a2, &(rat(8) * &l.a0)), scaled(&form_mul(&l.a1, &l.a1), &rat(3)));
            prop_assert_eq!(scaled(&l.a3, &(rat(16) * &l.a0 * &l.a0)), form_mul(&form_mul(&l.a1, &l.a1), &l.a1));
        }
        prop_assert!(is_isomorphic_special(&short, &model.special_short().unwrap()));
    }

    #[test]
    fn tangent_normalization_is_unimodular(m in nonspecial_model(), t in prop::array::uniform3(-2i64..=2)) {
        // (1 : 0 : 0) lies on b·y³z = f(x, z); move it with a unimodular change first.
        let u = LinearChange3::from_ints([[1, 0, 0], [t[0], 1, 0], [t[1], t[2], 1]]).unwrap();
        let form = m.to_form().transform(&u);
        let pt = u.inverse().apply_point(&[rat(1), rat(0), rat(0)]).map(|c| c.to_integer());
        let pt: [BigInt; 3] = pt;
        let (moved, total) = normalize_point_tangent(&form, &pt).unwrap();
        prop_assert!(total.is_unimodular());
        prop_assert_eq!(disc_ternary(&moved).unwrap(), disc_ternary(&form).unwrap());
    }

    #[test]
    fn weighted_normalization(m in nonspecial_model(), v in nu()) {
        let w = weighted_point(&m);
        let (n, nu1) = normalize_weighted_point(&w.c[0], &w.c[1], &w.c[2]).unwrap();
        prop_assert_eq!(w.act(&nu1), n.clone());
        let (again, one) = normalize_weighted_point(&n.c[0], &n.c[1], &n.c[2]).unwrap();
        prop_assert_eq!(&again, &n);
        prop_assert_eq!(one, rat(1));
        let moved = w.act(&v);
        prop_assert_eq!(normalize_weighted_point(&moved.c[0], &moved.c[1], &moved.c[2]).unwrap().0, n);
    }

    #[test]
    fn rational_isomorphism_is_an_equivalence(m1 in nonspecial_model(), v in nu(), w in nu(), other in nonspecial_model()) {
        let m2 = weighted_point(&m1).act(&v).model().unwrap();
        let m3 = weighted_point(&m2).act(&w).model().unwrap();
        let witness = is_isomorphic_q(&m1, &m2).unwrap().expect("scaled point is isomorphic");
        prop_assert_eq!(weighted_point(&m1).act(&witness), weighted_point(&m2));
        prop_assert!(is_isomorphic_q(&m1, &m1).unwrap().is_some());
        prop_assert!(is_isomorphic_q(&m2, &m1).unwrap().is_some());
        prop_assert!(is_isomorphic_q(&m1, &m3).unwrap().is_some());
        let forward = is_isomorphic_q(&m1, &other).unwrap().is_some();
        prop_assert_eq!(forward, is_isomorphic_q(&other, &m1).unwrap().is_some());
        prop_assert_eq!(forward, is_isomorphic_q(&m3, &other).unwrap().is_some());
    }

    #[test]
    fn geometric_invariants_survive_twists(m in nonspecial_model(), lambda in nu(), v in nu()) {
        let t = twist(&m, &lambda).unwrap();
        prop_assert_eq!(qbar_class(&t), qbar_class(&m));
        prop_assert_eq!(automorphism_type(&t).unwrap(), automorphism_type(&m).unwrap());
        let scaled = weighted_point(&m).act(&v).model().unwrap();
        prop_assert_eq!(automorphism_type(&scaled).unwrap(), automorphism_type(&m).unwrap());
    }

    #[test]
    fn reduced_equation_is_integral_and_isomorphic(m in nonspecial_model()) {
        let (c, f0) = reduced_equation(&m).unwrap();
        prop_assert!(f0.is_monic() && f0.c.iter().all(is_integral));
        prop_assert!(c.is_integer() && c > rat(0));
        let back = NonspecialShort::new(rat(1), f0.scale(&c)).unwrap();
        prop_assert!(is_isomorphic_q(&m, &back).unwrap().is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn local_minimization(m in nonspecial_model(), p in prop::sample::select(vec![2u64, 3, 5, 7]), k in 0u32..3) {
        // x ↦ p^k·x and a factor p^{3k} on the right give an integral, usually nonminimal model.
        let q = rat(p as i64).pow(k as i32);
        let f = BinaryQuartic::new(std::array::from_fn(|i| &m.f.c[i] * q.pow(4 - i as i32) * q.pow(3 * (k as i32 % 2)))).unwrap();
        let c = curve(&NonspecialShort::new(m.b.clone(), f).unwrap());
        let v_in = vp(&c.disc(), p);
        let min = minimize_at_prime(&c, p, 2).unwrap();
        let v_out = vp(&min.disc(), p);
        prop_assert!(v_out <= v_in);
        prop_assert_eq!((v_in - v_out) % 9, 0);
        prop_assert!(min.model.is_integral());
        let again = minimize_at_prime(&min, p, 2).unwrap();
        prop_assert_eq!(again.model, min.model);
    }

    #[test]
    fn good_reduction_matches_minimal_discriminant(m in nonspecial_model(), p in prop::sample::select(vec![5u64, 7, 11, 13])) {
        let c = curve(&m);
        prop_assume!(c.model.is_integral());
        let good = has_good_reduction_nonspecial(&m, p).unwrap().is_good();
        let min = minimize_at_prime(&c, p, 3).unwrap();
        prop_assert_eq!(good, vp(&min.disc(), p) == 0, "{} at {}", c, p);
    }

    #[test]
    fn three_is_always_bad(m in nonspecial_model()) {
        prop_assert!(bad_primes(&curve(&m)).unwrap().contains(&3));
    }

    #[test]
    fn ramified_twists_are_bad(m in nonspecial_model(), p in prop::sample::select(vec![5u64, 7, 11, 13]), e in 1i32..=2) {
        prop_assume!(has_good_reduction_nonspecial(&m, p).unwrap().is_good());
        let t = twist(&m, &rat(p as i64).pow(e)).unwrap();
        prop_assert!(!has_good_reduction_nonspecial(&t, p).unwrap().is_good());
    }

    #[test]
    fn twist_lists_are_duplicate_free_and_good(c in prop::array::uniform2(-2i64..=2), z9 in any::<bool>()) {
        // y³ = x⁴ + c₃x + c₄ keeps the bad primes small.
        let m = if z9 {
            NonspecialShort::from_ints(1, [1, 0, 0, c[0].max(1), 0])
        } else {
            NonspecialShort::from_ints(1, [1, 0, 0, c[0], c[1]])
        };
        let Ok(m) = m else { return Ok(()); };
        prop_assume!(!curve(&m).is_special());
        let s = [2, 3];
        let twists = twists_with_good_reduction_outside(&m, &s).unwrap();
        for (i, t) in twists.iter().enumerate() {
            for u in &twists[..i] {
                prop_assert!(is_isomorphic_q(t, u).unwrap().is_none());
            }
            for p in [5, 7, 11, 13, 17, 19] {
                prop_assert!(has_good_reduction_nonspecial(t, p).unwrap().is_good());
            }
        }
    }

    #[test]
    fn special_curves_are_bad_at_two_and_three(i in 0usize..26, a in prop::sample::select(vec![1i64, -1, 2, 6, -12])) {
        let table = ClassificationTable::embedded();
        let s = SpecialShort::new(rat(1), table.classes[i].poly.scale(&rat(a))).unwrap();
        let c = PicardCurve::new(PicardModel::SpecialShort(s)).unwrap();
        let bad = bad_primes(&c).unwrap();
        prop_assert!(bad.contains(&2) && bad.contains(&3));
        prop_assert!(!has_good_reduction(&c, 2).unwrap().is_good());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn special_polynomials_have_vanishing_i(b in -50i64..=50, c in -200i64..=200) {
        let Ok(sp) = SpecialPolynomial::new(rat(b), rat(c)) else { return Ok(()); };
        let g = sp.to_quartic();
        prop_assert!(invariant_i(&g).is_zero());
        prop_assert_eq!(disc_binary(&g), special_poly_discriminant(&sp));
    }
}

#[test]
fn f3_is_four_on_the_eight_biquadratic_cases() {
    for g in [[-3, 0, 6, 0, 1], [-3, 0, -6, 0, 1], [-12, 0, 12, 0, 1], [-12, 0, -12, 0, 1]] {
        let g = QPoly::from_ints(&g);
        for a in [3, 9] {
            assert_eq!(special_f3_family(&rat(a), &g).unwrap(), 4, "{} with a = {a}", g.render("y"));
        }
    }
}

#[test]
fn shadow_pairing_fixes_only_the_two_self_paired_entries() {
    let t = ClassificationTable::embedded();
    let fixed: Vec<String> = t.classes.iter().filter(|c| c.is_self_paired()).map(|c| c.render()).collect();
    assert_eq!(fixed, ["x^4 + x", "x^4 - 12*x^2 + 32*x - 12"]);
    for c in &t.classes {
        assert_eq!(t.classes[c.shadow].shadow, c.index);
    }
}
