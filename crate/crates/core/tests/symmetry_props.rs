use proptest::prelude::*;
use zerone::info::Alphabet;
use zerone::symmetry::{self, Config, CylinderEvent, PositionalMap};

fn finitary_perm(support: i64) -> impl Strategy<Value = PositionalMap> {
    let ids: Vec<i64> = (-support..=support).collect();
    Just(ids.clone()).prop_shuffle().prop_map(move |img| {
        PositionalMap::finitary(ids.iter().copied().zip(img)).unwrap()
    })
}

fn map() -> impl Strategy<Value = PositionalMap> {
    prop_oneof![
        (-5i64..=5).prop_map(PositionalMap::shift),
        finitary_perm(4),
        ((-3i64..=3), finitary_perm(3)).prop_map(|(k, f)| symmetry::compose(&PositionalMap::shift(k), &f)),
    ]
}

fn config(values: &[usize]) -> Config {
    (-40i64..).zip(values.iter().copied()).collect()
}

proptest! {
    #[test]
    fn pullback_is_contravariant(f in map(), g in map(), values in prop::collection::vec(0usize..3, 81)) {
        let c = config(&values);
        let target: Vec<i64> = (-5..=5).collect();
        let inner_target: Vec<i64> = (-30..=30).collect();
        let cg = symmetry::apply_map(&c, &g, &inner_target).unwrap();
        let lhs = symmetry::apply_map(&cg, &f, &target).unwrap();
        let rhs = symmetry::apply_map(&c, &symmetry::compose(&g, &f), &target).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_evaluates_pointwise(f in map(), g in map(), h in map()) {
        let fg = symmetry::compose(&f, &g);
        let assoc_l = symmetry::compose(&fg, &h);
        let assoc_r = symmetry::compose(&f, &symmetry::compose(&g, &h));
        for k in -20..=20 {
            prop_assert_eq!(fg.eval(k), f.eval(g.eval(k)));
            prop_assert_eq!(assoc_l.eval(k), assoc_r.eval(k));
        }
    }

    #[test]
    fn identity_is_neutral(f in map()) {
        let id = PositionalMap::identity();
        for k in -20..=20 {
            prop_assert_eq!(symmetry::compose(&id, &f).eval(k), f.eval(k));
            prop_assert_eq!(symmetry::compose(&f, &id).eval(k), f.eval(k));
        }
    }

    #[test]
    fn maps_round_trip_through_json(f in map()) {
        let back: PositionalMap = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        for k in -20..=20 {
            prop_assert_eq!(back.eval(k), f.eval(k));
        }
    }

    #[test]
    fn shift_search_within_diameter(j in prop::collection::btree_set(-10i64..=10, 1..6)) {
        let j: Vec<i64> = j.into_iter().collect();
        let diam = j.last().unwrap() - j.first().unwrap();
        let gens = [PositionalMap::shift(1), PositionalMap::shift(-1)];
        let found = symmetry::find_disjoint_map(&gens, &j, (diam + 1) as usize).unwrap();
        let m = found.expect("a shift by diam + 1 works");
        prop_assert!(j.iter().all(|k| !j.contains(&m.eval(*k))));
        prop_assert!((m.eval(0)).abs() <= diam + 1);
    }

    #[test]
    fn symmetry_check_matches_brute_force(bits in prop::collection::vec(any::<bool>(), 8), pi in finitary_perm(2)) {
        let window = vec![-1, 0, 1];
        let event = CylinderEvent::from_bits(window.clone(), Alphabet::binary(), &bits).unwrap();
        let lookup = |a: &dyn Fn(i64) -> usize| bits[window.iter().fold(0, |acc, &k| acc * 2 + a(k))];
        // Every configuration on [-2, 2], which covers W and pi(W).
        let mut expected = true;
        for code in 0..32 {
            let a = |k: i64| (code >> (k + 2)) & 1;
            let a_pi = |k: i64| a(pi.eval(k));
            expected &= lookup(&a) == lookup(&a_pi);
        }
        prop_assert_eq!(symmetry::is_positional_symmetry(&event, &pi).unwrap(), expected);
    }

    #[test]
    fn event_hex_round_trip(bits in prop::collection::vec(any::<bool>(), 27)) {
        let e = CylinderEvent::from_bits(vec![0, 1, 2], Alphabet::indexed(3), &bits).unwrap();
        let back: CylinderEvent = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        prop_assert_eq!(back, e);
    }
}
