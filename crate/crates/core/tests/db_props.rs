//! Property tests for database records, building and lookup.

use proptest::prelude::*;

use picard_core::arith::rat::rat;
use picard_core::db::{build_record, curve_keys, db_build, BuildOptions, CurveInput, CurveRecord, Database, Query};
use picard_core::invariants::weighted_point;
use picard_core::models::{NonspecialShort, PicardCurve, PicardModel, SpecialShort};
use picard_core::special_class::ClassificationTable;

fn shallow() -> BuildOptions {
    BuildOptions { depth: 1 }
}

fn nonspecial_curve() -> impl Strategy<Value = PicardCurve> {
    (prop::sample::select(vec![1i64, 2, 3]), prop::array::uniform4(-4i64..=4)).prop_filter_map(
        "smooth and nonspecial",
        |(b, c)| {
            let m = NonspecialShort::from_ints(b, [1, c[0], c[1], c[2], c[3]]).ok()?;
            let curve = PicardCurve::new(PicardModel::NonspecialShort(m)).ok()?;
            (!curve.is_special()).then_some(curve)
        },
    )
}

fn special_curve() -> impl Strategy<Value = PicardCurve> {
    (0usize..26, prop::sample::select(vec![1i64, -1, 2, 3, -6])).prop_map(|(i, a)| {
        let table = ClassificationTable::embedded();
        let m = SpecialShort::new(rat(1), table.classes[i].poly.scale(&rat(a))).unwrap();
        PicardCurve::new(PicardModel::SpecialShort(m)).unwrap()
    })
}

fn any_curve() -> impl Strategy<Value = PicardCurve> {
    prop_oneof![3 => nonspecial_curve(), 1 => special_curve()]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn records_round_trip_through_text(c in any_curve()) {
        let table = ClassificationTable::embedded();
        let mut r = build_record(&CurveInput::new(c), &table, &shallow()).unwrap();
        r.label = "1.1.1".into();
        let text = r.to_text();
        let back = CurveRecord::parse(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn every_input_is_found(curves in prop::collection::vec(any_curve(), 1..5)) {
        let table = ClassificationTable::embedded();
        let inputs: Vec<CurveInput> = curves.iter().cloned().map(CurveInput::new).collect();
        let db = db_build(&inputs, &table, &shallow()).unwrap();
        let db = Database::parse(&db.to_text()).unwrap();
        prop_assert!(db.validate(&table).is_empty());
        for c in &curves {
            let hits = db.query(&Query::Curve(c.clone()), &table).unwrap();
            prop_assert_eq!(hits.len(), 1, "{}", c);
            prop_assert!(!db.query(&Query::Twists(c.clone()), &table).unwrap().is_empty());
            prop_assert!(db.query(&Query::BadPrimes(hits[0].bad_primes.clone()), &table).unwrap().contains(&hits[0]));
            if let Some(m) = c.model.nonspecial_short() {
                let by_point = db.query(&Query::Point(weighted_point(&m)), &table).unwrap();
                prop_assert_eq!(by_point, hits.clone());
                prop_assert_eq!(&hits[0].key, &curve_keys(c, &table).unwrap().key);
            }
        }
    }

    #[test]
    fn rebuild_is_independent_of_input_order(
        (curves, shuffled) in prop::collection::vec(any_curve(), 1..5)
            .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle())),
    ) {
        let table = ClassificationTable::embedded();
        let build = |cs: &[PicardCurve]| {
            let inputs: Vec<CurveInput> = cs.iter().cloned().map(CurveInput::new).collect();
            db_build(&inputs, &table, &shallow()).unwrap().to_text()
        };
        prop_assert_eq!(build(&curves), build(&shuffled));
    }
}
