//! Finite randomness tests: indexed families of string sets whose `i`-th
//! level has measure at most `2^{-i}`.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::sets::{measure, StringSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Ml,
    Kurtz,
    Granular,
}

impl std::str::FromStr for TestKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ml" => Ok(TestKind::Ml),
            "kurtz" => Ok(TestKind::Kurtz),
            "granular" => Ok(TestKind::Granular),
            other => Err(format!("unknown test kind {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Test {
    pub kind: TestKind,
    pub levels: Vec<StringSet>,
    /// Level length bounds `g(i)`, required for granular tests.
    #[serde(default, rename = "g", skip_serializing_if = "Option::is_none")]
    pub granularity: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum TestViolation {
    MeasureBound { level: usize, measure: Dyadic },
    MissingGranularity,
    GranularityTooShort { levels: usize, provided: usize },
    GranularityNotIncreasing { index: usize },
    StringTooLong { level: usize, length: usize, bound: usize },
}

impl Test {
    pub fn new(kind: TestKind, levels: Vec<StringSet>) -> Self {
        Self { kind, levels, granularity: None }
    }

    pub fn granular(levels: Vec<StringSet>, g: Vec<usize>) -> Self {
        Self { kind: TestKind::Granular, levels, granularity: Some(g) }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level_measures(&self) -> Vec<Dyadic> {
        self.levels.iter().map(measure).collect()
    }

    /// Every violated invariant; empty iff the test is well formed.
    pub fn validate(&self) -> Vec<TestViolation> {
        let mut out = Vec::new();
        for (level, set) in self.levels.iter().enumerate() {
            let m = measure(set);
            if m > Dyadic::pow2_neg(level) {
                out.push(TestViolation::MeasureBound { level, measure: m });
            }
        }
        if self.kind == TestKind::Granular {
            match &self.granularity {
                None => out.push(TestViolation::MissingGranularity),
                Some(g) => {
                    if g.len() < self.levels.len() {
                        out.push(TestViolation::GranularityTooShort {
                            levels: self.levels.len(),
                            provided: g.len(),
                        });
                    }
                    for index in 1..g.len() {
                        if g[index] <= g[index - 1] {
                            out.push(TestViolation::GranularityNotIncreasing { index });
                        }
                    }
                    for (level, set) in self.levels.iter().enumerate() {
                        let Some(&bound) = g.get(level) else { continue };
                        if let Some(length) = set.iter().map(|s| s.len()).find(|&l| l > bound) {
                            out.push(TestViolation::StringTooLong { level, length, bound });
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    #[test]
    fn measure_bound_is_checked_per_level() {
        let t = Test::new(
            TestKind::Ml,
            vec![[bs("")].into_iter().collect(), [bs("0"), bs("10")].into_iter().collect()],
        );
        let v = t.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], TestViolation::MeasureBound { level: 1, .. }));
    }

    #[test]
    fn granular_checks() {
        let t = Test::granular(vec![[bs("000")].into_iter().collect()], vec![2]);
        assert!(matches!(
            t.validate()[..],
            [TestViolation::StringTooLong { level: 0, length: 3, bound: 2 }]
        ));
        let t = Test::new(TestKind::Granular, vec![]);
        assert_eq!(t.validate(), vec![TestViolation::MissingGranularity]);
    }

    #[test]
    fn json_round_trip() {
        let t = Test::granular(vec![[bs("01")].into_iter().collect()], vec![2]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"kind":"granular","levels":[["01"]],"g":[2]}"#);
        assert_eq!(serde_json::from_str::<Test>(&s).unwrap(), t);
    }
}
