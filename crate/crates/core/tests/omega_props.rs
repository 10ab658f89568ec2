use proptest::prelude::*;
use randlab::gen::gen_omega_fixture;
use randlab::omega::{
    build_solovay_test, compute_against, hit_stage, joint_horizon, OmegaOptions, UseBound,
};
use randlab::settling_time;

proptest! {
    #[test]
    fn j_weighs_at_most_the_machine(seed in any::<u64>()) {
        let fx = gen_omega_fixture(seed);
        let j = build_solovay_test(&fx.machine, &fx.x, joint_horizon(&fx.machine, &fx.x));
        prop_assert!(j.weight <= fx.machine.weight());
        prop_assert!(j.retirement_weight <= fx.machine.weight());
    }

    #[test]
    fn answers_are_final_prefixes(seed in any::<u64>(), n in 0usize..8) {
        let fx = gen_omega_fixture(seed);
        let h = joint_horizon(&fx.machine, &fx.x);
        let j = build_solovay_test(&fx.machine, &fx.x, h);
        for bound in [UseBound::Literal, UseBound::Envelope] {
            let opts = OmegaOptions { bound, ..Default::default() };
            if let Ok(a) = compute_against(&fx.machine, &fx.x, n, &j, opts) {
                prop_assert_eq!(a.prefix, fx.x.final_prefix(n));
            }
        }
        // Once Ω↾g(n) settles after t_0 and after stage n, the scan stops within g(n) bits.
        let opts = OmegaOptions::default();
        if let Some(g) = fx.machine.k_clamped(&fx.x.final_prefix(n), h) {
            if n > 0 && settling_time(&fx.machine, g) >= hit_stage(&j, &fx.machine, opts.hits).max(n) {
                let a = compute_against(&fx.machine, &fx.x, n, &j, opts).unwrap();
                prop_assert!(a.bits_used <= g);
            }
        }
    }

    #[test]
    fn envelope_use_is_monotone(seed in any::<u64>()) {
        let fx = gen_omega_fixture(seed);
        let j = build_solovay_test(&fx.machine, &fx.x, joint_horizon(&fx.machine, &fx.x));
        let opts = OmegaOptions { bound: UseBound::Envelope, ..Default::default() };
        let used: Vec<_> = (0..8).map(|n| compute_against(&fx.machine, &fx.x, n, &j, opts).ok().map(|a| a.bits_used)).collect();
        for w in used.windows(2) {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                prop_assert!(a <= b);
            }
        }
    }
}
