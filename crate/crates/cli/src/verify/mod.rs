//! Named self-check suites behind one trait, selected by `verify <suite>`.

mod suites;

use serde::Serialize;

use crate::args::SuiteArg;
use randlab::Functional;

pub struct SuiteContext {
    pub seed: u64,
    pub scale: usize,
    /// Checked alongside the generated functionals when present.
    pub functional: Option<Functional>,
}

impl SuiteContext {
    /// Fixture seed for item `i` of a suite; stable across runs and platforms.
    pub fn fixture_seed(&self, salt: u64, i: usize) -> u64 {
        let mut z = self.seed ^ salt.rotate_left(32) ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn count(&self, base: usize) -> usize {
        base * self.scale
    }
}

#[derive(Debug, Serialize)]
pub struct InvariantReport {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl InvariantReport {
    pub fn new(name: &'static str) -> Self {
        Self { name, checked: 0, failed: 0, first_failure: None }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub pass: bool,
    pub invariants: Vec<InvariantReport>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub scale: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.suites.iter().flat_map(|s| &s.invariants).map(|i| i.failed).sum()
    }
}

pub trait Suite {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &SuiteContext) -> Vec<InvariantReport>;
}

/// Every suite, in the order `all` runs them.
pub fn registry() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(suites::Core),
        Box::new(suites::Kc),
        Box::new(suites::Machine),
        Box::new(suites::Reductions),
        Box::new(suites::Granular),
        Box::new(suites::Diagonalizers),
        Box::new(suites::Omega),
    ]
}

pub fn run(suite: SuiteArg, ctx: &SuiteContext) -> VerifyReport {
    let wanted = suite.name();
    let suites = registry()
        .into_iter()
        .filter(|s| wanted == "all" || s.name() == wanted)
        .map(|s| {
            let invariants = s.run(ctx);
            let pass = invariants.iter().all(|i| i.failed == 0);
            SuiteReport { suite: s.name(), pass, invariants }
        })
        .collect();
    VerifyReport { seed: ctx.seed, scale: ctx.scale, suites }
}
