use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use teich::coords::{classify, d_inf, embed, truncate, Class, FnVector, Profile, TailRule};
use teich::deform::{lengthen, twist};
use teich::holonomy::{dehn_twist_word, xpiece_rep, CurveWord, XKind};
use teich::hyptrig::hexagon_solve;
use teich::surface::{BaseRule, BaseStructure, Coord, LengthRule, PantsGraph};

fn profile() -> BoxedStrategy<Profile> {
    prop_oneof![
        Just(Profile::Zero),
        (-2.0..2.0, 0.2..3.0).prop_map(|(scale, exponent)| Profile::Decay { scale, exponent }),
        (-2.0..2.0).prop_map(|value| Profile::Const { value }),
        (-1.0..1.0).prop_map(|scale| Profile::LogGrowth { scale }),
        (-1.0..1.0, 0.1..1.5).prop_map(|(scale, exponent)| Profile::PowerGrowth { scale, exponent }),
    ]
    .boxed()
}

fn bounded_profile() -> BoxedStrategy<Profile> {
    prop_oneof![
        Just(Profile::Zero),
        (-2.0..2.0, 0.2..3.0).prop_map(|(scale, exponent)| Profile::Decay { scale, exponent }),
        (-2.0..2.0).prop_map(|value| Profile::Const { value }),
    ]
    .boxed()
}

fn base() -> impl Strategy<Value = Arc<BaseStructure>> {
    prop_oneof![
        (0.2..3.0).prop_map(|value| LengthRule::Constant { value }),
        (0.5..2.0, 0.5..2.0).prop_map(|(scale, exponent)| LengthRule::PowerDecay { scale, exponent }),
    ]
    .prop_flat_map(|rule| {
        prop_oneof![Just(PantsGraph::ladder()), Just(PantsGraph::flute(1.0).unwrap())]
            .prop_map(move |g| Arc::new(BaseStructure::new(g, BaseRule::new(rule)).unwrap()))
    })
}

fn overrides() -> impl Strategy<Value = BTreeMap<i64, Coord>> {
    prop::collection::btree_map(1i64..40, (0.1..5.0, -3.0..3.0), 0..5)
        .prop_map(|m| m.into_iter().map(|(i, (length, twist))| (i, Coord { length, twist })).collect())
}

fn vector_on(b: Arc<BaseStructure>, tail: BoxedStrategy<Profile>) -> impl Strategy<Value = FnVector> {
    (overrides(), tail.clone(), tail).prop_map(move |(ov, length, tw)| {
        FnVector::new(b.clone(), ov, TailRule { length, twist: tw }).unwrap()
    })
}

/// Two or three bounded vectors over one base.
fn bounded_triple() -> impl Strategy<Value = [FnVector; 3]> {
    base().prop_flat_map(|b| {
        let v = || vector_on(b.clone(), bounded_profile());
        (v(), v(), v()).prop_map(|(x, y, z)| [x, y, z])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_inf_is_a_metric([x, y, z] in bounded_triple()) {
        let (xy, yz, xz) = (d_inf(&x, &y).unwrap(), d_inf(&y, &z).unwrap(), d_inf(&x, &z).unwrap());
        prop_assert_eq!(d_inf(&x, &x).unwrap(), 0.0);
        prop_assert_eq!(xy, d_inf(&y, &x).unwrap());
        prop_assert!(xz <= xy + yz + 1e-12);
        prop_assert_eq!(xy == 0.0, x == y);
    }

    #[test]
    fn embedding_is_isometric([x, y, _z] in bounded_triple()) {
        let diff = embed(&x).sub(&embed(&y)).unwrap();
        prop_assert_eq!(d_inf(&x, &y).unwrap(), diff.sup_norm());
    }

    #[test]
    fn classes_are_nested(x in base().prop_flat_map(|b| vector_on(b, profile()))) {
        let c = classify(&x).unwrap();
        prop_assert!(c.memberships.is_nested(), "{:?}", c);
        prop_assert_eq!(classify(&truncate(&x, 7)).unwrap().finest, Class::Fs);
    }

    #[test]
    fn zero_ls_is_a_cone(x in base().prop_flat_map(|b| vector_on(b, profile())), k in -5.0..5.0f64) {
        let t = x.tail();
        let scaled = match t.twist {
            Profile::Zero => Profile::Zero,
            Profile::Decay { scale, exponent } => Profile::Decay { scale: k * scale, exponent },
            Profile::Const { value } => Profile::Const { value: k * value },
            Profile::LogGrowth { scale } => Profile::LogGrowth { scale: k * scale },
            Profile::PowerGrowth { scale, exponent } => Profile::PowerGrowth { scale: k * scale, exponent },
        };
        let y = FnVector::new(x.base_structure().clone(), x.overrides().clone(), TailRule { length: t.length, twist: scaled }).unwrap();
        if classify(&x).unwrap().memberships.zero_ls {
            prop_assert!(classify(&y).unwrap().memberships.zero_ls);
        }
    }

    #[test]
    fn single_index_deformations_keep_the_class(
        x in base().prop_flat_map(|b| vector_on(b, profile())),
        i in 1i64..30, t in -2.0..2.0f64, r in 0.0..2.0f64,
    ) {
        let before = classify(&x).unwrap().memberships;
        let y = lengthen(&twist(&x, i, t).unwrap(), i, r).unwrap();
        prop_assert_eq!(classify(&y).unwrap().memberships, before);
    }

    #[test]
    fn full_twist_relabels_words(l in 0.1..4.0f64, tau in -4.0..4.0f64, n in -3i32..=3, bd in 0.2..6.0f64) {
        for (kind, b) in [(XKind::OneHoled, vec![bd]), (XKind::FourHoled, vec![bd, 1.0, 2.0, 0.7])] {
            let w = CurveWord::dual(kind);
            let moved = xpiece_rep(kind, l, tau + n as f64 * l, &b).unwrap();
            let here = xpiece_rep(kind, l, tau, &b).unwrap();
            let dw = dehn_twist_word(&w, &CurveWord::beta(kind), n).unwrap();
            let (a, c) = (moved.curve_length(&w).unwrap(), here.curve_length(&dw).unwrap());
            prop_assert!((a - c).abs() < 1e-10 * a.max(1.0), "{:?}: {} vs {}", kind, a, c);
        }
    }

    #[test]
    fn hexagon_relations(a in 0.05..8.0f64, b in 0.05..8.0f64, c in 0.05..8.0f64) {
        let h = hexagon_solve(a, b, c).unwrap();
        prop_assert!(h.cosine_rule_residual() < 1e-12);
        prop_assert!(h.sine_rule_residual() < 1e-12);
        let p = hexagon_solve(b, c, a).unwrap();
        prop_assert!((p.c_opp - h.a_opp).abs() <= 1e-12 * h.a_opp.max(1.0));
    }
}
