use randlab::diagonal::{diagonalize_ce, diagonalize_complexity, escaping_counterexample, verify_kraft_witnesses};
use randlab::gen::{
    gen_ce_batch, gen_complexity_fixture, gen_functional, gen_granular, gen_kurtz_normal, gen_omega_fixture,
    gen_requests,
};
use randlab::granular::{complexity_to_test, exact_levels, martingale_to_test, test_to_complexity, test_to_martingale};
use randlab::omega::{build_solovay_test, compute_against, joint_horizon, OmegaOptions};
use randlab::reductions::{build_tree, compile_reduction, extract_bounded_test, extract_ml_test};
use randlab::sets::is_prefix_free_list;
use randlab::{
    apply_functional, gen_machine, kc_assign, measure, validate_functional, validate_martingale, BitString, Dyadic,
    Functional, KcError, KcRequest, MachineTable, Mode,
};

use super::{InvariantReport, Suite, SuiteContext};

fn round_trips<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq>(v: &T) -> bool {
    let text = serde_json::to_string(v).expect("encodings are plain JSON");
    serde_json::from_str::<T>(&text).is_ok_and(|back| back == *v)
}

/// Generated functionals plus the one passed on the command line.
fn functionals(ctx: &SuiteContext, salt: u64, base: usize) -> Vec<(String, Functional)> {
    let mut out: Vec<_> = (0..ctx.count(base))
        .map(|i| {
            let seed = ctx.fixture_seed(salt, i);
            (format!("seed {seed}"), gen_functional(seed, 10))
        })
        .collect();
    if let Some(phi) = &ctx.functional {
        out.push(("--functional".into(), phi.clone()));
    }
    out
}

pub struct Core;

impl Suite for Core {
    fn name(&self) -> &'static str {
        "core"
    }

    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport> {
        let mut valid = InvariantReport::new("functional_tables_validate");
        let mut deterministic = InvariantReport::new("apply_is_deterministic");
        let mut json = InvariantReport::new("json_round_trip");
        for (label, phi) in functionals(ctx, 1, 20) {
            let violations = validate_functional(&phi);
            valid.check(violations.is_empty(), || format!("{label}: {violations:?}"));
            let index = phi.index();
            for sigma in BitString::all_up_to(4) {
                for n in 0..=4 {
                    let a = index.apply(&sigma, n);
                    deterministic.check(a == apply_functional(&phi, &sigma, n), || format!("{label}: {sigma} at {n}"));
                }
            }
            json.check(round_trips(&phi), || label.clone());
        }
        let mut pf = InvariantReport::new("prefix_free_sets_weigh_at_most_one");
        for i in 0..ctx.count(20) {
            let state = kc_assign(&gen_requests(ctx.fixture_seed(2, i), 12)).expect("generated requests fit");
            let words: randlab::StringSet = state.codewords().cloned().collect();
            pf.check(measure(&words) <= Dyadic::one() && words.weight() <= Dyadic::one(), || format!("fixture {i}"));
        }
        vec![valid, deterministic, json, pf]
    }
}

pub struct Kc;

impl Suite for Kc {
    fn name(&self) -> &'static str {
        "kc"
    }

    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport> {
        let mut served = InvariantReport::new("feasible_requests_are_served");
        let mut prefix_free = InvariantReport::new("codewords_prefix_free");
        let mut free = InvariantReport::new("free_weight_is_the_remainder");
        let mut refused = InvariantReport::new("overweight_rejected_at_first_excess");
        for i in 0..ctx.count(100) {
            let seed = ctx.fixture_seed(3, i);
            let reqs = gen_requests(seed, 12);
            let total = Dyadic::sum(&reqs.iter().map(|r| Dyadic::pow2_neg(r.length)).collect::<Vec<_>>());
            match kc_assign(&reqs) {
                Ok(state) => {
                    let words: Vec<BitString> = state.codewords().cloned().collect();
                    let lengths = words.iter().zip(&reqs).all(|(w, r)| w.len() == r.length);
                    served.check(lengths && words.len() == reqs.len(), || format!("seed {seed}"));
                    prefix_free.check(is_prefix_free_list(&words), || format!("seed {seed}"));
                    free.check(&state.free_weight + &total == Dyadic::one(), || format!("seed {seed}"));
                }
                Err(e) => served.check(false, || format!("seed {seed}: {e}")),
            }
            // A length-0 request asks for the whole space on top of the rest.
            let mut over = reqs.clone();
            over.push(KcRequest::new(0, BitString::empty()));
            let expected = if reqs.is_empty() { None } else { Some(reqs.len()) };
            let got = match kc_assign(&over) {
                Ok(_) => None,
                Err(KcError::WeightExceeded { index, .. }) => Some(index),
            };
            refused.check(got == expected, || format!("seed {seed}: {got:?} vs {expected:?}"));
        }
        vec![served, prefix_free, free, refused]
    }
}

pub struct Machine;

impl Suite for Machine {
    fn name(&self) -> &'static str {
        "machine"
    }

    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport> {
        let mut valid = InvariantReport::new("generated_machines_validate");
        let mut omega = InvariantReport::new("omega_non_decreasing");
        let mut k = InvariantReport::new("k_non_increasing");
        let mut settle = InvariantReport::new("prefix_settled_from_settling_time");
        for i in 0..ctx.count(40) {
            let seed = ctx.fixture_seed(4, i);
            let m: MachineTable = gen_machine(seed, 5, (seed % 12) as usize);
            valid.check(m.validate().is_empty(), || format!("seed {seed}"));
            let omegas: Vec<Dyadic> = (0..=m.horizon).map(|s| m.omega_clamped(s)).collect();
            omega.check(omegas.windows(2).all(|w| w[0] <= w[1]), || format!("seed {seed}"));
            for sigma in BitString::all_up_to(3) {
                let ks: Vec<_> = (0..=m.horizon).map(|s| m.k_clamped(&sigma, s)).collect();
                let ok = ks.windows(2).all(|w| w[0].is_none() || (w[1].is_some() && w[1] <= w[0]));
                k.check(ok, || format!("seed {seed}: {sigma}"));
            }
            for t in 0..8 {
                let s = randlab::settling_time(&m, t);
                let target = m.final_omega().binary_prefix(t);
                let ok = (s..=m.horizon).all(|r| m.omega_clamped(r).binary_prefix(t) == target);
                settle.check(ok, || format!("seed {seed}: t = {t}"));
            }
        }
        vec![valid, omega, k, settle]
    }
}

pub struct Reductions;

impl Suite for Reductions {
    fn name(&self) -> &'static str {
        "reductions"
    }

    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport> {
        let mut tree_ok = InvariantReport::new("tree_validates");
        let mut round_trip = InvariantReport::new("members_recovered_with_use_d_minus_s");
        let mut compiled = InvariantReport::new("compiled_reductions_validate");
        for i in 0..ctx.count(20) {
            let seed = ctx.fixture_seed(5, i);
            let n = gen_kurtz_normal(seed, 4, 9);
            let tree = match build_tree(&n) {
                Ok(tree) => tree,
                Err(e) => {
                    tree_ok.check(false, || format!("seed {seed}: {e}"));
                    continue;
                }
            };
            tree_ok.check(tree.validate().is_empty(), || format!("seed {seed}"));
            for mode in [Mode::Tt, Mode::Wtt] {
                let phi = compile_reduction(&tree, mode);
                compiled.check(validate_functional(&phi).is_empty(), || format!("seed {seed} {mode:?}"));
                let index = phi.index();
                let last = tree.last_stage();
                for x in n.members() {
                    let code = &tree.map[&x.prefix(tree.cut(last))];
                    let ok = (1..=last).all(|s| {
                        index.apply(code, tree.cut(s)).is_some_and(|a| {
                            a.output == x.prefix(tree.cut(s)) && a.use_len == tree.cut(s) - s
                        })
                    });
                    round_trip.check(ok, || format!("seed {seed} {mode:?}: {x}"));
                }
            }
        }

        let mut valid = InvariantReport::new("input_functionals_validate");
        let mut ml = InvariantReport::new("ml_levels_measure_at_most_2^-k");
        let mut bounded = InvariantReport::new("bounded_levels_measure_at_most_2^-i");
        for (label, phi) in functionals(ctx, 6, 20) {
            let violations = validate_functional(&phi);
            valid.check(violations.is_empty(), || format!("{label}: {violations:?}"));
            if !violations.is_empty() {
                continue;
            }
            match extract_ml_test(&phi, 6) {
                Ok(t) => {
                    for (k, m) in t.level_measures().iter().enumerate() {
                        ml.check(*m <= Dyadic::pow2_neg(k), || format!("{label}: level {k} has {m}"));
                    }
                }
                Err(e) => ml.check(false, || format!("{label}: {e}")),
            }
            if phi.mode != Mode::Turing {
                match extract_bounded_test(&phi, &[]) {
                    Ok(t) => {
                        for (k, m) in t.level_measures().iter().enumerate() {
                            bounded.check(*m <= Dyadic::pow2_neg(k), || format!("{label}: level {k} has {m}"));
                        }
                    }
                    Err(e) => bounded.check(false, || format!("{label}: {e}")),
                }
            }
        }
        vec![tree_ok, round_trip, compiled, valid, ml, bounded]
    }
}

pub struct Granular;

impl Suite for Granular {
    fn name(&self) -> &'static str {
        "granular"
    }

    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport> {
        let mut fair = InvariantReport::new("martingale_is_fair");
        let mut capital = InvariantReport::new("members_reach_capital_i");
        let mut back = InvariantReport::new("martingale_to_test_keeps_members");
        let mut complexity = InvariantReport::new("complexity_round_trip_keeps_levels");
        for i in 0..ctx.count(20) {
            let seed = ctx.fixture_seed(7, i);
            let t = gen_granular(seed, 4, 8);
            let g = t.granularity.clone().unwrap_or_default();
            let m = match test_to_martingale(&t) {
                Ok(m) => m,
                Err(e) => {
                    fair.check(false, || format!("seed {seed}: {e}"));
                    continue;
                }
            };
            fair.check(validate_martingale(&m).is_empty(), || format!("seed {seed}"));
            let members: Vec<BitString> = match g.last() {
                Some(&d) => BitString::all_of_length(d).filter(|x| t.levels.iter().all(|l| l.covers(x))).collect(),
                None => Vec::new(),
            };
            let v = martingale_to_test(&m, &g);
            for x in &members {
                let ok = g.iter().enumerate().all(|(i, &gi)| *m.value(&x.prefix(gi)).unwrap() >= Dyadic::from_int(i as u64));
                capital.check(ok, || format!("seed {seed}: {x}"));
                let ok = v.as_ref().is_ok_and(|v| v.levels.iter().enumerate().all(|(i, l)| l.contains(&x.prefix(g[1 << i]))));
                back.check(ok, || format!("seed {seed}: {x}"));
            }
            let ok = test_to_complexity(&t).is_ok_and(|(machine, bound)| {
                let (exact, _) = exact_levels(&t).expect("granular fixtures have exact levels");
                complexity_to_test(&machine, &bound.g)
                    .is_ok_and(|r| exact.iter().enumerate().all(|(i, l)| l.iter().all(|s| r.levels[i].contains(s))))
            });
            complexity.check(ok, || format!("seed {seed}"));
        }
        vec![fair, capital, back, complexity]
    }
}

pub struct Diagonalizers;

impl Suite for Diagonalizers {
    fn name(&self) -> &'static str {
        "diagonalizers"
    }

    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport> {
        let mut escape = InvariantReport::new("ce_no_functional_computes_x");
        let mut kraft = InvariantReport::new("ce_kraft_witnesses");
        for i in 0..ctx.count(3) {
            let seed = ctx.fixture_seed(8, i);
            let b = gen_ce_batch(seed);
            let trace = diagonalize_ce(&b.f, &b.functionals, &b.plan, b.horizon);
            for (e, phi) in b.functionals.iter().enumerate() {
                let cx = escaping_counterexample(&b.f, phi, &b.plan, e, &trace);
                escape.check(cx.is_none(), || format!("seed {seed}: Φ_{e} on {}", cx.unwrap()));
            }
            kraft.check(verify_kraft_witnesses(&trace, &b.f).pass, || format!("seed {seed}"));
        }
        let mut satisfied = InvariantReport::new("complexity_requirements_satisfied");
        let mut ledger = InvariantReport::new("complexity_ledger_consistent");
        for i in 0..ctx.count(5) {
            let seed = ctx.fixture_seed(9, i);
            let fx = gen_complexity_fixture(seed);
            let run = diagonalize_complexity(&fx.f, &fx.machine, &fx.plan, fx.horizon);
            satisfied.check(run.all_satisfied(), || format!("seed {seed}"));
            ledger.check(run.ledger_consistent(), || format!("seed {seed}"));
        }
        vec![escape, kraft, satisfied, ledger]
    }
}

pub struct Omega;

impl Suite for Omega {
    fn name(&self) -> &'static str {
        "omega"
    }

    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport> {
        let mut weight = InvariantReport::new("solovay_weight_at_most_machine_weight");
        let mut correct = InvariantReport::new("answers_are_final_prefixes");
        for i in 0..ctx.count(30) {
            let seed = ctx.fixture_seed(10, i);
            let fx = gen_omega_fixture(seed);
            let j = build_solovay_test(&fx.machine, &fx.x, joint_horizon(&fx.machine, &fx.x));
            weight.check(j.weight <= fx.machine.weight(), || format!("seed {seed}"));
            for n in 0..6 {
                if let Ok(a) = compute_against(&fx.machine, &fx.x, n, &j, OmegaOptions::default()) {
                    correct.check(a.prefix == fx.x.final_prefix(n), || format!("seed {seed}: n = {n}"));
                }
            }
        }
        vec![weight, correct]
    }
}
