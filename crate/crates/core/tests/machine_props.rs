use proptest::prelude::*;
use randlab::{gen_machine, k_at_stage, omega_at_stage, settling_time, BitString, Dyadic};

proptest! {
    #[test]
    fn omega_non_decreasing_to_the_full_table(seed in any::<u64>(), horizon in 0usize..12) {
        let m = gen_machine(seed, 5, horizon);
        let mut prev = Dyadic::zero();
        for s in 0..=horizon {
            let w = omega_at_stage(&m, s).unwrap();
            prop_assert!(w >= prev);
            prev = w;
        }
        prop_assert_eq!(prev, m.weight());
    }

    #[test]
    fn k_non_increasing(seed in any::<u64>(), horizon in 0usize..12) {
        let m = gen_machine(seed, 4, horizon);
        for sigma in BitString::all_up_to(4) {
            let ks: Vec<_> = (0..=horizon).map(|s| k_at_stage(&m, &sigma, s).unwrap()).collect();
            for w in ks.windows(2) {
                // None is infinity.
                prop_assert!(w[0].is_none() || (w[1].is_some() && w[1] <= w[0]));
            }
        }
    }

    #[test]
    fn settling_non_decreasing_and_correct(seed in any::<u64>(), horizon in 0usize..12) {
        let m = gen_machine(seed, 5, horizon);
        let ts: Vec<_> = (0..8).map(|t| settling_time(&m, t)).collect();
        prop_assert!(ts.windows(2).all(|w| w[0] <= w[1]));
        for (t, &s) in ts.iter().enumerate() {
            let target = m.final_omega().binary_prefix(t);
            prop_assert!((s..=horizon).all(|r| m.omega_clamped(r).binary_prefix(t) == target));
            prop_assert!(s == 0 || m.omega_clamped(s - 1).binary_prefix(t) != target);
        }
    }
}
