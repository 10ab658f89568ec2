//! A c.e. set with initial segments above `f(n) + e` in complexity.
//!
//! `R_e` requires attention at stage `s + 1` when its interval still has
//! room and `K_{s+1}(A_s↾n) ≤ f(n) + e` for every `n ≤ n_{e+1}`. The least
//! such `e ≤ s` gets the least free element of `[n_e, n_{e+1})`.
//!
//! Each action for `R_e` at element `n` is charged the current shortest
//! descriptions of `A_s↾t` for `t ∈ (n, n_{e+1}]`. Those strings are new
//! every time, so the charged weight is a lower bound for the weight of
//! distinct programs used, which a prefix-free machine caps at 1.

use std::collections::BTreeSet;

use serde::Serialize;

use super::intervals::IntervalPlan;
use super::{characteristic, EnumerationTrace, Event};
use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::functional::UseFunction;
use crate::machine::MachineTable;
use crate::sets::StringSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub stage: usize,
    pub t: usize,
    pub string: BitString,
    pub program: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RequirementLedger {
    pub requirement: usize,
    pub interval: (usize, usize),
    pub actions: usize,
    pub drained: bool,
    /// Least `n ≤ n_{e+1}` with `K(A↾n) > f(n) + e` at the final stage.
    pub witness_n: Option<usize>,
    pub satisfied: bool,
    pub charges: Vec<LedgerEntry>,
    /// `Σ 2^{-f(t)-e}` over the charges.
    pub bound: Dyadic,
    /// Weight of the distinct programs charged.
    pub program_weight: Dyadic,
    /// The charge cannot be paid by any prefix-free machine.
    pub exceeds_kraft: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityRun {
    pub trace: EnumerationTrace,
    pub ledger: Vec<RequirementLedger>,
    pub machine_weight: Dyadic,
}

impl ComplexityRun {
    pub fn all_satisfied(&self) -> bool {
        self.ledger.iter().all(|r| r.satisfied)
    }

    /// `bound ≤ program weight ≤ machine weight` for every requirement.
    pub fn ledger_consistent(&self) -> bool {
        self.ledger.iter().all(|r| r.bound <= r.program_weight && r.program_weight <= self.machine_weight)
    }
}

fn below_bound(m: &MachineTable, a: &BTreeSet<usize>, f: &UseFunction, e: usize, n: usize, stage: usize) -> bool {
    match (m.k_clamped(&characteristic(a, n), stage), f.get(n)) {
        (Some(k), Some(fn_)) => k <= fn_ + e,
        _ => false,
    }
}

pub fn diagonalize_complexity(f: &UseFunction, m: &MachineTable, plan: &IntervalPlan, horizon: usize) -> ComplexityRun {
    let count = plan.count();
    let mut a = BTreeSet::new();
    let mut events = Vec::new();
    let mut charges: Vec<Vec<LedgerEntry>> = vec![Vec::new(); count];

    for s in 0..horizon {
        let stage = s + 1;
        let chosen = (0..count.min(s + 1)).find(|&e| {
            let room = plan.interval(e).any(|i| !a.contains(&i));
            room && (0..=plan.cuts[e + 1]).all(|n| below_bound(m, &a, f, e, n, stage))
        });
        let Some(e) = chosen else { continue };
        let element = plan.interval(e).find(|i| !a.contains(i)).unwrap();
        let mut witnesses = StringSet::new();
        for t in element + 1..=plan.cuts[e + 1] {
            let string = characteristic(&a, t);
            let program = m.shortest_program(&string, stage.min(m.horizon)).unwrap().program.clone();
            witnesses.insert(program.clone());
            charges[e].push(LedgerEntry { stage, t, string, program });
        }
        a.insert(element);
        events.push(Event { stage, requirement: e, element, witnesses });
    }

    let final_stage = horizon.max(m.horizon);
    let ledger = charges
        .into_iter()
        .enumerate()
        .map(|(e, charges)| {
            let witness_n = (0..=plan.cuts[e + 1]).find(|&n| !below_bound(m, &a, f, e, n, final_stage));
            let mut bound = Dyadic::zero();
            for c in &charges {
                bound += Dyadic::pow2_neg(f.get(c.t).unwrap() + e);
            }
            let programs: StringSet = charges.iter().map(|c| c.program.clone()).collect();
            RequirementLedger {
                requirement: e,
                interval: (plan.cuts[e], plan.cuts[e + 1]),
                actions: events.iter().filter(|ev: &&Event| ev.requirement == e).count(),
                drained: plan.interval(e).all(|i| a.contains(&i)),
                witness_n,
                satisfied: witness_n.is_some(),
                exceeds_kraft: bound > Dyadic::one(),
                program_weight: programs.weight(),
                bound,
                charges,
            }
        })
        .collect();
    ComplexityRun { trace: EnumerationTrace { events, final_set: a }, ledger, machine_weight: m.weight() }
}
