use proptest::prelude::*;
use randlab::diagonal::{diagonalize_ce, diagonalize_complexity, escaping_counterexample, verify_kraft_witnesses};
use randlab::gen::{gen_ce_batch, gen_complexity_fixture};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ce_set_escapes_every_functional(seed in any::<u64>()) {
        let b = gen_ce_batch(seed);
        let trace = diagonalize_ce(&b.f, &b.functionals, &b.plan, b.horizon);
        prop_assert!(trace.validate().is_empty());
        for (e, phi) in b.functionals.iter().enumerate() {
            prop_assert_eq!(escaping_counterexample(&b.f, phi, &b.plan, e, &trace), None);
            let events: Vec<_> = trace.events_for(e).collect();
            prop_assert!(events.len() <= b.plan.interval(e).len());
            prop_assert!(events.iter().all(|ev| b.plan.interval(e).contains(&ev.element)));
        }
        prop_assert!(verify_kraft_witnesses(&trace, &b.f).pass);
    }

    #[test]
    fn complexity_requirements_end_satisfied(seed in any::<u64>()) {
        let c = gen_complexity_fixture(seed);
        let run = diagonalize_complexity(&c.f, &c.machine, &c.plan, c.horizon);
        prop_assert!(run.all_satisfied());
        prop_assert!(run.ledger_consistent());
        prop_assert!(run.ledger.iter().all(|r| !r.drained && !r.exceeds_kraft));
        for ev in &run.trace.events {
            prop_assert!(c.plan.interval(ev.requirement).contains(&ev.element));
        }
    }

    #[test]
    fn traces_replay_byte_for_byte(seed in any::<u64>()) {
        let b = gen_ce_batch(seed);
        let one = serde_json::to_string(&diagonalize_ce(&b.f, &b.functionals, &b.plan, b.horizon)).unwrap();
        let two = serde_json::to_string(&diagonalize_ce(&b.f, &b.functionals, &b.plan, b.horizon)).unwrap();
        prop_assert_eq!(one, two);
        let c = gen_complexity_fixture(seed);
        let one = serde_json::to_string(&diagonalize_complexity(&c.f, &c.machine, &c.plan, c.horizon)).unwrap();
        let two = serde_json::to_string(&diagonalize_complexity(&c.f, &c.machine, &c.plan, c.horizon)).unwrap();
        prop_assert_eq!(one, two);
    }
}
