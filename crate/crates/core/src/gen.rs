//! Seeded fixture generators. Every fixture is a pure function of its seed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::diagonal::{characteristic, find_intervals, IntervalPlan, PlanMode};
use crate::dyadic::Dyadic;
use crate::functional::{Functional, Mode, Pair, UseFunction};
use crate::kc::{KcRequest, KcState};
use crate::machine::{Approximation, MachineTable};
use crate::reductions::{NormalForm, NormalizedTest};
use crate::sets::StringSet;
use crate::test_family::Test;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_bits(rng: &mut impl Rng, len: usize) -> BitString {
    (0..len).map(|_| rng.gen_bool(0.5)).collect()
}

/// Requests with lengths `≤ max_len` and total weight at most 1.
pub fn gen_requests(seed: u64, max_len: usize) -> Vec<KcRequest> {
    let mut rng = rng(seed);
    let count = rng.gen_range(1..=40);
    let mut left = Dyadic::one();
    let mut out = Vec::new();
    for _ in 0..count {
        let length = rng.gen_range(0..=max_len);
        if let Some(rest) = left.checked_sub(&Dyadic::pow2_neg(length)) {
            left = rest;
            let payload_len = rng.gen_range(0..=4);
            out.push(KcRequest::new(length, random_bits(&mut rng, payload_len)));
        }
    }
    out
}

/// Non-decreasing use values on `0..=n`, each at most `cap`.
fn random_use(rng: &mut impl Rng, n: usize, cap: usize) -> Vec<usize> {
    let mut u = rng.gen_range(0..=cap.min(2));
    (0..=n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                u = (u + 1).min(cap);
            }
            u
        })
        .collect()
}

/// Consistent tables with outputs of at most `max_out` bits, in every mode.
pub fn gen_functional(seed: u64, max_out: usize) -> Functional {
    let mut rng = rng(seed);
    match rng.gen_range(0..3) {
        0 => turing_tree(&mut rng, max_out),
        m => {
            let mode = if m == 1 { Mode::Tt } else { Mode::Wtt };
            let n = rng.gen_range(1..=max_out);
            let use_values = random_use(&mut rng, n, 6);
            let keep = if mode == Mode::Tt { 1.0 } else { 0.85 };
            let pairs = layered_pairs(&mut rng, &use_values, |r, _, _| r.gen_bool(0.5), keep, 0);
            Functional::new(mode, pairs.into_iter().map(|(p, _)| p).collect())
                .with_use(UseFunction::from_values(&use_values))
        }
    }
}

// Grows outputs along oracle prefixes: each pair extends its parent's
// output by 0 to 3 bits.
fn turing_tree(rng: &mut impl Rng, max_out: usize) -> Functional {
    let depth = rng.gen_range(0..=6);
    let mut pairs = Vec::new();
    let mut frontier = vec![(BitString::empty(), BitString::empty())];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for (sigma, tau) in frontier {
            if !rng.gen_bool(0.8) {
                continue;
            }
            let grow = rng.gen_range(0..=3).min(max_out - tau.len().min(max_out));
            let tau = tau.concat(&random_bits(rng, grow));
            pairs.push(Pair::new(sigma.clone(), tau.clone()));
            next.push((sigma.child(false), tau.clone()));
            next.push((sigma.child(true), tau));
        }
        frontier = next;
    }
    Functional::new(Mode::Turing, pairs)
}

/// Pairs `(ρ, τ_n(ρ))` for every `ρ` of length `use_values[n]`, where
/// `τ_n(ρ)` extends `τ_{n-1}(ρ↾use_values[n-1])` by the bit chosen for
/// `(ρ, n - 1)`. A node is kept
/// with probability `keep`, and a dropped node takes its subtree with it,
/// so the table stays downward closed. Visibility stages grow by up to
/// `lag` along each branch. Returns each pair with its node depth `n`.
fn layered_pairs(
    rng: &mut impl Rng,
    use_values: &[usize],
    mut bit: impl FnMut(&mut dyn rand::RngCore, &BitString, usize) -> bool,
    keep: f64,
    lag: usize,
) -> Vec<(Pair, usize)> {
    let mut out = Vec::new();
    let root = BitString::zeros(0).extensions(use_values[0]).collect::<Vec<_>>();
    let mut level: BTreeMap<BitString, (BitString, usize)> =
        root.into_iter().map(|rho| (rho, (BitString::empty(), 0))).collect();
    for (rho, (tau, stage)) in &level {
        out.push((Pair::at_stage(rho.clone(), tau.clone(), *stage), 0));
    }
    for n in 1..use_values.len() {
        let mut next = BTreeMap::new();
        for (rho, (tau, stage)) in &level {
            for child in rho.extensions(use_values[n]) {
                if !rng.gen_bool(keep) {
                    continue;
                }
                let tau = tau.child(bit(rng, &child, n - 1));
                let stage = stage + rng.gen_range(0..=lag);
                out.push((Pair::at_stage(child.clone(), tau.clone(), stage), n));
                next.insert(child, (tau, stage));
            }
        }
        level = next;
    }
    out
}

/// Kurtz-normal test with 2 to `max_levels` levels and lengths at most `max_len`.
pub fn gen_kurtz_normal(seed: u64, max_levels: usize, max_len: usize) -> NormalizedTest {
    let mut rng = rng(seed);
    let depth = rng.gen_range(2..=max_levels.max(2));
    let mut lengths = vec![rng.gen_range(2..=(max_len + 1 - depth).clamp(2, 4))];
    for i in 1..depth {
        let room = max_len - (depth - 1 - i) - lengths[i - 1];
        lengths.push(lengths[i - 1] + rng.gen_range(1..=room.clamp(1, 3)));
    }
    let mut levels = vec![BitString::all_of_length(lengths[0]).collect::<StringSet>()];
    for i in 1..depth {
        // Half of the extensions of level i - 1 keeps the count at 2^{d_i - i}.
        let mut candidates: Vec<BitString> = levels[i - 1].iter().flat_map(|p| p.extensions(lengths[i])).collect();
        candidates.shuffle(&mut rng);
        candidates.truncate(candidates.len() / 2);
        levels.push(candidates.into_iter().collect());
    }
    let padding = vec![StringSet::new(); depth];
    NormalizedTest { form: NormalForm::Kurtz, levels, lengths, padding }
}

/// Granular test with `Σ 2^i μ(V_i) ≤ 1`, mostly nested so members exist.
pub fn gen_granular(seed: u64, max_levels: usize, max_len: usize) -> Test {
    let mut rng = rng(seed);
    let depth = rng.gen_range(1..=max_levels);
    let mut g = vec![rng.gen_range(1..=3)];
    for _ in 1..depth {
        let next = g.last().unwrap() + rng.gen_range(1..=2);
        g.push(next.min(max_len));
    }
    g.dedup();
    let depth = g.len();
    let mut left = Dyadic::one();
    let mut levels: Vec<StringSet> = Vec::with_capacity(depth);
    for i in 0..depth {
        let cost = Dyadic::pow2_neg(g[i] - i.min(g[i]));
        let mut level = StringSet::new();
        let tries = rng.gen_range(0..=4);
        for _ in 0..tries {
            let sigma = match levels.last().and_then(|prev| {
                let prev: Vec<_> = prev.iter().collect();
                prev.choose(&mut rng).map(|p| (*p).clone())
            }) {
                Some(p) if rng.gen_bool(0.8) => p.concat(&random_bits(&mut rng, g[i] - p.len())),
                _ => random_bits(&mut rng, g[i]),
            };
            if level.contains(&sigma) {
                continue;
            }
            if let Some(rest) = left.checked_sub(&cost) {
                left = rest;
                level.insert(sigma);
            }
        }
        levels.push(level);
    }
    Test::granular(levels, g)
}

/// Functionals and the plan they are diagonalized against.
#[derive(Clone, Debug, Serialize)]
pub struct CeBatch {
    pub f: UseFunction,
    pub functionals: Vec<Functional>,
    pub plan: IntervalPlan,
    pub horizon: usize,
}

/// Up to three downward-closed wtt functionals with use `u(n) ≤ f(n-1)` and
/// visibility non-decreasing along every branch. Some functionals output
/// random sparse bits; the others track the construction by reading, on an
/// oracle with `v` ones, the first `v` elements of each interval as members.
/// Below its own interval every `Φ_e` outputs the set the construction
/// actually builds there.
pub fn gen_ce_batch(seed: u64) -> CeBatch {
    let mut rng = rng(seed);
    let base = rng.gen_range(1..=2);
    let step = rng.gen_range(6..=30);
    let f_values: Vec<usize> = (0..48).map(|n| base + usize::from(n >= step)).collect();
    let f = UseFunction::from_values(&f_values);
    let count = rng.gen_range(1..=3);
    let plan = find_intervals(&f, count, PlanMode::SumGt2).expect("f is bounded, so every interval closes");
    let out_len = plan.end() + 1;
    let lag = rng.gen_range(0..=2);
    let mut functionals = Vec::new();
    let mut max_vis = 0;
    for e in 0..count {
        // Higher requirements never move the lower part of X, so Φ_e can be
        // handed its final value from a run against Φ_0, …, Φ_{e-1}.
        let lower = IntervalPlan { cuts: plan.cuts[..=e].to_vec(), mode: plan.mode };
        let known = crate::diagonal::diagonalize_ce(&f, &functionals, &lower, max_vis + plan.end() + e + 2).final_set;
        let density = rng.gen_range(0.05..0.4);
        let tracker = rng.gen_bool(0.6);
        let interval_start = |n: usize| plan.cuts.iter().rev().find(|&&c| c <= n).copied().unwrap_or(0);
        let mut u = vec![0];
        for n in 1..=out_len {
            let prev = u[n - 1];
            let grown = if rng.gen_bool(0.5) { prev + 1 } else { prev };
            u.push(grown.min(f_values[n - 1]));
        }
        let keep = rng.gen_range(0.97..=1.0);
        let bit = |r: &mut dyn rand::RngCore, rho: &BitString, n: usize| {
            if n < plan.cuts[e] {
                known.contains(&n)
            } else if tracker {
                (n - interval_start(n)) < rho.iter().filter(|&b| b).count()
            } else {
                r.gen_bool(density)
            }
        };
        let pairs = layered_pairs(&mut rng, &u, bit, keep, lag);
        max_vis = max_vis.max(pairs.iter().map(|(p, _)| p.stage).max().unwrap_or(0));
        let mut phi = Functional::new(Mode::Wtt, pairs.into_iter().map(|(p, _)| p).collect())
            .with_use(UseFunction::from_values(&u));
        phi.normalized = true;
        functionals.push(phi);
    }
    let horizon = max_vis + plan.end() + count + 2;
    CeBatch { f, functionals, plan, horizon }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexityFixture {
    pub f: UseFunction,
    pub machine: MachineTable,
    pub plan: IntervalPlan,
    pub horizon: usize,
}

/// Constant `f ≡ c` for `c ∈ {3, 4}` and a Kraft–Chaitin machine that tries
/// to keep requirements attentive: it follows a run of the construction and
/// describes every initial segment up to `n_{e+1}` of the current set, with
/// programs close to the bound `f(n) + e`.
pub fn gen_complexity_fixture(seed: u64) -> ComplexityFixture {
    let mut rng = rng(seed);
    let c = rng.gen_range(3..=4);
    let f = UseFunction::constant(c, 64);
    let count = rng.gen_range(1..=3);
    let plan = find_intervals(&f, count, PlanMode::WeightedGt2e).expect("constant f closes every interval");
    let mut kc = KcState::new();
    let mut stages = Vec::new();
    let machine_horizon = rng.gen_range(0..=20);
    let mut a = std::collections::BTreeSet::new();
    for _ in 0..rng.gen_range(1..=8) {
        let e = rng.gen_range(0..count);
        let stage = rng.gen_range(0..=machine_horizon);
        // A spoiled chain has one description too long to count.
        let spoiled = rng.gen_bool(0.15).then(|| rng.gen_range(0..=plan.cuts[e + 1]));
        for n in 0..=plan.cuts[e + 1] {
            if kc.assigned.len() == 64 {
                break;
            }
            let length = c + e + usize::from(spoiled == Some(n)) - usize::from(rng.gen_bool(0.2));
            if kc.push(&KcRequest::new(length, characteristic(&a, n))).is_ok() {
                stages.push(stage);
            }
        }
        // Elements go in least-first, so A meets each interval in an initial segment.
        if let Some(next) = plan.interval(e).find(|i| !a.contains(i)) {
            a.insert(next);
        }
    }
    let mut machine = kc.to_machine();
    for (entry, stage) in machine.entries.iter_mut().zip(stages) {
        entry.halt_stage = stage;
    }
    machine.horizon = machine_horizon;
    let horizon = machine.horizon + plan.end() + count + 2;
    ComplexityFixture { f, machine, plan, horizon }
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaFixture {
    pub machine: MachineTable,
    pub x: Approximation,
}

/// A non-decreasing approximation with `precision`-bit values and a machine,
/// on the same stage axis, describing some of its prefixes.
pub fn gen_omega_fixture(seed: u64) -> OmegaFixture {
    let mut rng = rng(seed);
    let horizon = rng.gen_range(3..=12);
    let precision = rng.gen_range(2..=6u32);
    let top = 1u64 << precision;
    let mut k = rng.gen_range(0..top / 2);
    let mut values = Vec::with_capacity(horizon + 1);
    for _ in 0..=horizon {
        if rng.gen_bool(0.3) && k + 1 < top {
            k = rng.gen_range(k + 1..top);
        }
        values.push(Dyadic::from_parts(k, precision));
    }
    let x = Approximation::new(values);
    let mut kc = KcState::new();
    let mut stages = Vec::new();
    for _ in 0..rng.gen_range(1..=14) {
        let s = rng.gen_range(0..=horizon);
        let n = rng.gen_range(0..=precision as usize + 1);
        let length = rng.gen_range(1..=6);
        if kc.push(&KcRequest::new(length, x.prefix(s, n))).is_ok() {
            stages.push(rng.gen_range(0..=horizon));
        }
    }
    let mut machine = kc.to_machine();
    for (entry, stage) in machine.entries.iter_mut().zip(stages) {
        entry.halt_stage = stage;
    }
    machine.horizon = horizon;
    OmegaFixture { machine, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::validate_functional;
    use crate::sets::measure;

    #[test]
    fn generated_fixtures_are_valid() {
        for seed in 0..40 {
            let reqs = gen_requests(seed, 12);
            let w = Dyadic::sum(&reqs.iter().map(|r| Dyadic::pow2_neg(r.length)).collect::<Vec<_>>());
            assert!(w <= Dyadic::one());

            let phi = gen_functional(seed, 10);
            assert!(validate_functional(&phi).is_empty(), "seed {seed}: {:?}", validate_functional(&phi));
            assert!(phi.pairs.iter().all(|p| p.tau.len() <= 10));

            let n = gen_kurtz_normal(seed, 4, 10);
            assert!(n.validate().is_empty(), "seed {seed}: {:?}", n.validate());
            assert!(*n.lengths.last().unwrap() <= 10);

            let t = gen_granular(seed, 4, 8);
            assert!(t.validate().is_empty(), "seed {seed}: {:?}", t.validate());
            let mut budget = Dyadic::zero();
            for (i, l) in t.levels.iter().enumerate() {
                budget += measure(l).shl(i);
            }
            assert!(budget <= Dyadic::one());

            let b = gen_ce_batch(seed);
            assert!(b.plan.validate(&b.f).is_empty());
            for phi in &b.functionals {
                assert!(validate_functional(phi).is_empty(), "seed {seed}");
            }

            let c = gen_complexity_fixture(seed);
            assert!(c.machine.validate().is_empty(), "seed {seed}: {:?}", c.machine.validate());
            assert!(c.machine.entries.len() <= 64);

            let o = gen_omega_fixture(seed);
            assert!(o.machine.validate().is_empty());
            assert!(o.x.validate().is_empty());
        }
    }

    #[test]
    fn same_seed_same_fixture() {
        assert_eq!(gen_functional(5, 10), gen_functional(5, 10));
        assert_eq!(gen_omega_fixture(5).machine, gen_omega_fixture(5).machine);
    }
}
