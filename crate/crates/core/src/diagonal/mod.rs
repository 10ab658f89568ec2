//! Stage-by-stage enumerations of c.e. sets that defeat every functional of
//! a given use, or every short description on a machine.

pub mod ce;
pub mod complexity;
pub mod intervals;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::sets::StringSet;

pub use ce::{diagonalize_ce, escaping_counterexample, verify_kraft_witnesses, KraftReport, RequirementWitnesses};
pub use complexity::{diagonalize_complexity, ComplexityRun, LedgerEntry, RequirementLedger};
pub use intervals::{find_intervals, IntervalError, IntervalPlan, PlanMode, PlanViolation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub stage: usize,
    pub requirement: usize,
    pub element: usize,
    pub witnesses: StringSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTrace {
    pub events: Vec<Event>,
    pub final_set: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum TraceViolation {
    StageOrder { index: usize },
    Repeated { element: usize },
    FinalSetMismatch,
}

/// Characteristic string of `set` on `0..len`.
pub fn characteristic(set: &BTreeSet<usize>, len: usize) -> BitString {
    (0..len).map(|i| set.contains(&i)).collect()
}

impl EnumerationTrace {
    /// The set after every event up to and including `stage`.
    pub fn set_at(&self, stage: usize) -> BTreeSet<usize> {
        self.events.iter().take_while(|e| e.stage <= stage).map(|e| e.element).collect()
    }

    pub fn events_for(&self, requirement: usize) -> impl Iterator<Item = &Event> + '_ {
        self.events.iter().filter(move |e| e.requirement == requirement)
    }

    pub fn validate(&self) -> Vec<TraceViolation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (index, e) in self.events.iter().enumerate() {
            if index > 0 && e.stage <= self.events[index - 1].stage {
                out.push(TraceViolation::StageOrder { index });
            }
            if !seen.insert(e.element) {
                out.push(TraceViolation::Repeated { element: e.element });
            }
        }
        if seen != self.final_set {
            out.push(TraceViolation::FinalSetMismatch);
        }
        out
    }
}
