//! A c.e. set that no functional of use `f` computes, when the weights
//! `2^{-f}` are locally large.
//!
//! At stage `s + 1` the least `e ≤ s` is served for which some `t` in its
//! interval outside `X_s` and some oracle `τ` of length `f(t)` have
//! `X_s↾(t+1) ⊆ Φ_e^τ[s]`; the least such `t` enters `X`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::intervals::IntervalPlan;
use super::{characteristic, EnumerationTrace, Event};
use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::functional::{Functional, UseFunction};
use crate::sets::{validate_prefix_free, StringSet};

pub fn diagonalize_ce(f: &UseFunction, functionals: &[Functional], plan: &IntervalPlan, horizon: usize) -> EnumerationTrace {
    let requirements = functionals.len().min(plan.count());
    let indexes: Vec<_> = functionals.iter().map(Functional::index).collect();
    let mut x = BTreeSet::new();
    let mut events = Vec::new();
    for s in 0..horizon {
        'serve: for e in 0..requirements.min(s + 1) {
            for t in plan.interval(e) {
                if x.contains(&t) {
                    continue;
                }
                let Some(len) = f.get(t) else { continue };
                let target = characteristic(&x, t + 1);
                let witnesses: StringSet = BitString::all_of_length(len)
                    .filter(|tau| target.is_prefix_of(&indexes[e].longest_output(tau, Some(s))))
                    .collect();
                if !witnesses.is_empty() {
                    x.insert(t);
                    events.push(Event { stage: s + 1, requirement: e, element: t, witnesses });
                    break 'serve;
                }
            }
        }
    }
    EnumerationTrace { events, final_set: x }
}

/// An oracle of length `f(m_{e+1} - 1)` on which `Φ_e` still computes the
/// final set through the end of interval `e`, if any.
pub fn escaping_counterexample(
    f: &UseFunction,
    phi: &Functional,
    plan: &IntervalPlan,
    e: usize,
    trace: &EnumerationTrace,
) -> Option<BitString> {
    let end = plan.cuts[e + 1];
    let len = f.get(end - 1)?;
    let target = characteristic(&trace.final_set, end);
    let index = phi.index();
    BitString::all_of_length(len).find(|y| target.is_prefix_of(&index.longest_output(y, None)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RequirementWitnesses {
    pub requirement: usize,
    pub events: usize,
    pub weight: Dyadic,
    pub prefix_free: bool,
    pub lengths_non_decreasing: bool,
    pub lengths_match_use: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KraftReport {
    pub requirements: Vec<RequirementWitnesses>,
    pub pass: bool,
}

/// Per requirement: the union of witness oracles must be prefix-free with
/// lengths non-decreasing in event order, hence of weight at most 1.
pub fn verify_kraft_witnesses(trace: &EnumerationTrace, f: &UseFunction) -> KraftReport {
    let ids: BTreeSet<usize> = trace.events.iter().map(|e| e.requirement).collect();
    let mut requirements = Vec::new();
    for requirement in ids {
        let events: Vec<&Event> = trace.events_for(requirement).collect();
        let all: StringSet = events.iter().flat_map(|e| e.witnesses.iter().cloned()).collect();
        let lengths: Vec<usize> = events.iter().filter_map(|e| e.witnesses.iter().next().map(BitString::len)).collect();
        let lengths_non_decreasing = lengths.windows(2).all(|w| w[0] <= w[1]);
        let lengths_match_use = events.iter().all(|e| e.witnesses.iter().all(|w| Some(w.len()) == f.get(e.element)));
        let prefix_free = validate_prefix_free(&all);
        let weight = all.weight();
        let pass = prefix_free && lengths_non_decreasing && weight <= Dyadic::one();
        requirements.push(RequirementWitnesses {
            requirement,
            events: events.len(),
            weight,
            prefix_free,
            lengths_non_decreasing,
            lengths_match_use,
            pass,
        });
    }
    let pass = requirements.iter().all(|r| r.pass);
    KraftReport { requirements, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::diagonal::intervals::{find_intervals, PlanMode};
    use crate::functional::{validate_functional, Mode, Pair};

    // Oracle-independent: every oracle maps to `out`, with use 0.
    fn constant(out: &BitString) -> Functional {
        let pairs = (0..=out.len()).map(|n| Pair::new(BitString::empty(), out.prefix(n))).collect();
        let mut phi = Functional::new(Mode::Wtt, pairs).with_use(UseFunction::constant(0, out.len()));
        phi.normalized = true;
        phi
    }

    fn zeros(len: usize) -> Functional {
        constant(&BitString::zeros(len))
    }

    #[test]
    fn escapes_a_constant_functional() {
        let f = UseFunction::constant(0, 10);
        let plan = find_intervals(&f, 1, PlanMode::SumGt2).unwrap();
        assert_eq!(plan.cuts, vec![0, 3]);
        let phi = zeros(4);
        assert!(validate_functional(&phi).is_empty());
        let trace = diagonalize_ce(&f, &[phi.clone()], &plan, 6);
        assert!(trace.validate().is_empty());
        assert_eq!(trace.events.len(), 1);
        assert_eq!(trace.events[0].element, 0);
        assert_eq!(trace.events[0].witnesses, [bs("")].into_iter().collect());
        assert_eq!(escaping_counterexample(&f, &phi, &plan, 0, &trace), None);
        assert!(verify_kraft_witnesses(&trace, &f).pass);
    }

    #[test]
    fn empty_list_gives_empty_trace() {
        let f = UseFunction::constant(0, 10);
        let plan = find_intervals(&f, 2, PlanMode::SumGt2).unwrap();
        let trace = diagonalize_ce(&f, &[], &plan, 10);
        assert!(trace.events.is_empty());
        assert!(verify_kraft_witnesses(&trace, &f).requirements.is_empty());
    }

    #[test]
    fn lower_requirements_served_first() {
        let f = UseFunction::constant(0, 10);
        let plan = find_intervals(&f, 2, PlanMode::SumGt2).unwrap();
        // Φ_1 tracks from stage 2 on, once 0 is in X; stage 1 may only serve e = 0.
        let trace = diagonalize_ce(&f, &[zeros(7), constant(&bs("1000000"))], &plan, 10);
        let reqs: Vec<_> = trace.events.iter().map(|e| (e.stage, e.requirement, e.element)).collect();
        assert_eq!(reqs, vec![(1, 0, 0), (2, 1, 3)]);
    }

    #[test]
    fn witness_checks() {
        let f = UseFunction::constant(2, 4);
        let mk = |ws: &[&str]| EnumerationTrace {
            events: vec![Event { stage: 1, requirement: 0, element: 0, witnesses: ws.iter().map(|w| bs(w)).collect() }],
            final_set: [0].into_iter().collect(),
        };
        let r = verify_kraft_witnesses(&mk(&["00", "01"]), &f);
        assert!(r.pass);
        assert_eq!(r.requirements[0].weight, Dyadic::pow2_neg(1));
        let r = verify_kraft_witnesses(&mk(&["0", "01"]), &f);
        assert!(!r.requirements[0].prefix_free);
        assert!(!r.pass);
    }
}
