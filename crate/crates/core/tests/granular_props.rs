use proptest::prelude::*;
use randlab::gen::gen_granular;
use randlab::granular::{complexity_to_test, martingale_to_test, test_to_complexity, test_to_martingale};
use randlab::{validate_martingale, BitString, Dyadic, Test};

fn members(t: &Test) -> Vec<BitString> {
    let g = t.granularity.as_ref().unwrap();
    BitString::all_of_length(*g.last().unwrap()).filter(|x| t.levels.iter().all(|l| l.covers(x))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn martingale_is_fair(seed in any::<u64>()) {
        let m = test_to_martingale(&gen_granular(seed, 4, 8)).unwrap();
        prop_assert!(validate_martingale(&m).is_empty());
    }

    #[test]
    fn membership_survives_conversion(seed in any::<u64>()) {
        let t = gen_granular(seed, 4, 8);
        let g = t.granularity.clone().unwrap();
        let m = test_to_martingale(&t).unwrap();
        let back = martingale_to_test(&m, &g).unwrap();
        for x in members(&t) {
            for (i, &gi) in g.iter().enumerate() {
                prop_assert!(*m.value(&x.prefix(gi)).unwrap() >= Dyadic::from_int(i as u64));
            }
            for (i, level) in back.levels.iter().enumerate() {
                prop_assert!(level.contains(&x.prefix(g[1 << i])));
            }
        }
    }

    #[test]
    fn complexity_round_trip_keeps_levels(seed in any::<u64>()) {
        let t = gen_granular(seed, 4, 8);
        let (m, bound) = test_to_complexity(&t).unwrap();
        prop_assert!(m.validate().is_empty());
        let back = complexity_to_test(&m, &bound.g).unwrap();
        prop_assert!(back.validate().is_empty());
        let (exact, _) = randlab::granular::exact_levels(&t).unwrap();
        for (i, level) in exact.iter().enumerate() {
            for sigma in level {
                prop_assert!(back.levels[i].contains(sigma));
            }
        }
    }
}
