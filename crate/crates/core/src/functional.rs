//! Oracle functionals as finite extensional tables.
//!
//! A pair `(σ, τ)` states that every oracle extending `σ` is mapped to an
//! output extending `τ`. Pairs may carry the stage from which they are
//! visible, which gives the `[s]` approximations used by the enumeration
//! constructions; unannotated pairs are visible from stage 0.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Turing,
    Wtt,
    Tt,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "turing" => Ok(Mode::Turing),
            "wtt" => Ok(Mode::Wtt),
            "tt" => Ok(Mode::Tt),
            other => Err(format!("unknown reduction mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub sigma: BitString,
    pub tau: BitString,
    pub stage: usize,
}

impl Pair {
    pub fn new(sigma: BitString, tau: BitString) -> Self {
        Self { sigma, tau, stage: 0 }
    }

    pub fn at_stage(sigma: BitString, tau: BitString, stage: usize) -> Self {
        Self { sigma, tau, stage }
    }
}

// `[σ, τ]` or `[σ, τ, stage]`.
impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let len = if self.stage == 0 { 2 } else { 3 };
        let mut t = serializer.serialize_tuple(len)?;
        t.serialize_element(&self.sigma)?;
        t.serialize_element(&self.tau)?;
        if self.stage != 0 {
            t.serialize_element(&self.stage)?;
        }
        t.end()
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairVisitor;
        impl<'de> Visitor<'de> for PairVisitor {
            type Value = Pair;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("[sigma, tau] or [sigma, tau, stage]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Pair, A::Error> {
                let sigma = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let tau = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let stage = seq.next_element()?.unwrap_or(0);
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(4, &self));
                }
                Ok(Pair { sigma, tau, stage })
            }
        }
        deserializer.deserialize_seq(PairVisitor)
    }
}

/// Oracle-use bound: output length `n` ↦ length of the oracle prefix read.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UseFunction {
    pub table: BTreeMap<usize, usize>,
    pub monotone: bool,
}

impl UseFunction {
    pub fn from_values(values: &[usize]) -> Self {
        let table: BTreeMap<_, _> = values.iter().copied().enumerate().collect();
        let monotone = values.windows(2).all(|w| w[0] <= w[1]);
        Self { table, monotone }
    }

    pub fn constant(value: usize, horizon: usize) -> Self {
        Self::from_values(&vec![value; horizon + 1])
    }

    pub fn get(&self, n: usize) -> Option<usize> {
        self.table.get(&n).copied()
    }

    /// The contiguous domain `0..len` starting at zero.
    pub fn contiguous_len(&self) -> usize {
        let mut n = 0;
        while self.table.contains_key(&n) {
            n += 1;
        }
        n
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.table.values().zip(self.table.values().skip(1)).all(|(a, b)| a <= b)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum UseRepr {
    Values(Vec<usize>),
    Table {
        // Keys arrive as JSON object keys; untagged buffering keeps them as text.
        table: BTreeMap<String, usize>,
        #[serde(default)]
        monotone: Option<bool>,
    },
}

impl<'de> Deserialize<'de> for UseFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match UseRepr::deserialize(deserializer)? {
            UseRepr::Values(v) => UseFunction::from_values(&v),
            UseRepr::Table { table, monotone } => {
                let table = table
                    .into_iter()
                    .map(|(k, v)| k.parse::<usize>().map(|k| (k, v)))
                    .collect::<Result<_, _>>()
                    .map_err(|e| de::Error::custom(format!("use table key: {e}")))?;
                let mut f = UseFunction { table, monotone: false };
                f.monotone = monotone.unwrap_or_else(|| f.is_non_decreasing());
                f
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Functional {
    pub mode: Mode,
    pub pairs: Vec<Pair>,
    #[serde(default, rename = "use", skip_serializing_if = "Option::is_none")]
    pub use_fn: Option<UseFunction>,
    /// Claims downward closure; checked by [`validate_functional`].
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalized: bool,
}

impl Functional {
    pub fn new(mode: Mode, pairs: Vec<Pair>) -> Self {
        Self { mode, pairs, use_fn: None, normalized: false }
    }

    pub fn with_use(mut self, use_fn: UseFunction) -> Self {
        self.use_fn = Some(use_fn);
        self
    }

    pub fn index(&self) -> FunctionalIndex<'_> {
        FunctionalIndex::new(self)
    }

    /// Latest visibility stage over all pairs.
    pub fn last_stage(&self) -> usize {
        self.pairs.iter().map(|p| p.stage).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum FunctionalViolation {
    Functionality { first: (BitString, BitString), second: (BitString, BitString) },
    DownwardClosure { sigma: BitString, tau: BitString, missing: BitString },
    UseMissing,
    UseMismatch { sigma: BitString, tau: BitString, expected: Option<usize> },
    UseNotMonotone { n: usize },
}

/// Every violated invariant; an empty report means the functional is valid.
pub fn validate_functional(phi: &Functional) -> Vec<FunctionalViolation> {
    let mut out = Vec::new();
    let index = phi.index();

    for p in &phi.pairs {
        for k in 0..=p.sigma.len() {
            let Some(outputs) = index.by_sigma.get(&p.sigma.prefix(k)) else { continue };
            for q in outputs {
                let earlier = (&q.sigma, &q.tau) < (&p.sigma, &p.tau);
                // Report each unordered incomparable pair once.
                let report = k < p.sigma.len() || earlier;
                if report && !q.tau.comparable(&p.tau) {
                    out.push(FunctionalViolation::Functionality {
                        first: (q.sigma.clone(), q.tau.clone()),
                        second: (p.sigma.clone(), p.tau.clone()),
                    });
                }
            }
        }
    }

    if phi.normalized {
        for p in &phi.pairs {
            for m in 0..p.tau.len() {
                let rho = p.tau.prefix(m);
                let found = (0..=p.sigma.len()).any(|k| {
                    index
                        .by_sigma
                        .get(&p.sigma.prefix(k))
                        .is_some_and(|v| v.iter().any(|q| q.tau == rho))
                });
                if !found {
                    out.push(FunctionalViolation::DownwardClosure {
                        sigma: p.sigma.clone(),
                        tau: p.tau.clone(),
                        missing: rho,
                    });
                }
            }
        }
    }

    if matches!(phi.mode, Mode::Wtt | Mode::Tt) {
        match &phi.use_fn {
            None => out.push(FunctionalViolation::UseMissing),
            Some(f) => {
                for p in &phi.pairs {
                    let expected = f.get(p.tau.len());
                    if expected != Some(p.sigma.len()) {
                        out.push(FunctionalViolation::UseMismatch {
                            sigma: p.sigma.clone(),
                            tau: p.tau.clone(),
                            expected,
                        });
                    }
                }
            }
        }
    }

    if let Some(f) = &phi.use_fn {
        if f.monotone {
            let entries: Vec<_> = f.table.iter().collect();
            for w in entries.windows(2) {
                if w[1].1 < w[0].1 {
                    out.push(FunctionalViolation::UseNotMonotone { n: *w[1].0 });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Application {
    pub output: BitString,
    /// Length of the oracle prefix consulted by the minimal witness.
    #[serde(rename = "use")]
    pub use_len: usize,
}

/// Pairs grouped by oracle prefix for repeated evaluation.
pub struct FunctionalIndex<'a> {
    by_sigma: HashMap<&'a BitString, Vec<&'a Pair>>,
    max_sigma: usize,
}

impl<'a> FunctionalIndex<'a> {
    pub fn new(phi: &'a Functional) -> Self {
        let mut by_sigma: HashMap<&BitString, Vec<&Pair>> = HashMap::new();
        for p in &phi.pairs {
            by_sigma.entry(&p.sigma).or_default().push(p);
        }
        for v in by_sigma.values_mut() {
            v.sort_by(|a, b| a.tau.cmp(&b.tau));
        }
        let max_sigma = phi.pairs.iter().map(|p| p.sigma.len()).max().unwrap_or(0);
        Self { by_sigma, max_sigma }
    }

    fn visible_below<'s>(
        &'s self,
        oracle: &'s BitString,
        stage: Option<usize>,
    ) -> impl Iterator<Item = &'a Pair> + 's {
        (0..=oracle.len().min(self.max_sigma))
            .filter_map(move |k| self.by_sigma.get(&oracle.prefix(k)))
            .flatten()
            .copied()
            .filter(move |p| stage.is_none_or(|s| p.stage <= s))
    }

    /// Length-`n` output on `oracle`, witnessed by the pair with the shortest
    /// `σ ⊆ oracle` among those with `|τ| ≥ n`.
    pub fn apply(&self, oracle: &BitString, n: usize) -> Option<Application> {
        self.apply_at(oracle, n, None)
    }

    pub fn apply_at(&self, oracle: &BitString, n: usize, stage: Option<usize>) -> Option<Application> {
        self.visible_below(oracle, stage)
            .filter(|p| p.tau.len() >= n)
            .min_by(|a, b| (a.sigma.len(), &a.tau).cmp(&(b.sigma.len(), &b.tau)))
            .map(|p| Application { output: p.tau.prefix(n), use_len: p.sigma.len() })
    }

    /// `Φ^oracle[stage]`: the longest output among visible pairs below `oracle`.
    pub fn longest_output(&self, oracle: &BitString, stage: Option<usize>) -> BitString {
        self.visible_below(oracle, stage)
            .map(|p| &p.tau)
            .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
            .cloned()
            .unwrap_or_default()
    }
}

/// One-shot evaluation; use [`Functional::index`] for repeated queries.
pub fn apply_functional(phi: &Functional, oracle: &BitString, n: usize) -> Option<Application> {
    phi.index().apply(oracle, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn phi(pairs: &[(&str, &str)]) -> Functional {
        Functional::new(Mode::Turing, pairs.iter().map(|(s, t)| Pair::new(bs(s), bs(t))).collect())
    }

    #[test]
    fn validate_examples() {
        assert!(validate_functional(&phi(&[("0", "00"), ("00", "000")])).is_empty());
        let v = validate_functional(&phi(&[("0", "00"), ("0", "01")]));
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], FunctionalViolation::Functionality { .. }));
        let v = validate_functional(&phi(&[("0", "00"), ("00", "010")]));
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], FunctionalViolation::Functionality { .. }));
    }

    #[test]
    fn apply_examples() {
        let a = apply_functional(&phi(&[("0", "000")]), &bs("011"), 3).unwrap();
        assert_eq!((a.output, a.use_len), (bs("000"), 1));
        assert_eq!(apply_functional(&phi(&[]), &bs("1"), 1), None);
        let a = apply_functional(&phi(&[("0", "00"), ("01", "0011")]), &bs("010"), 4).unwrap();
        assert_eq!((a.output, a.use_len), (bs("0011"), 2));
    }

    #[test]
    fn use_function_checks() {
        let f = Functional::new(Mode::Wtt, vec![Pair::new(bs("0"), bs("00"))]);
        assert_eq!(validate_functional(&f), vec![FunctionalViolation::UseMissing]);
        let f = f.with_use(UseFunction::from_values(&[0, 1, 2]));
        assert!(matches!(validate_functional(&f)[..], [FunctionalViolation::UseMismatch { .. }]));
    }

    #[test]
    fn downward_closure_when_flagged() {
        let mut f = phi(&[("0", "01")]);
        f.normalized = true;
        let v = validate_functional(&f);
        assert_eq!(v.len(), 2);
        f.pairs.push(Pair::new(bs(""), bs("")));
        f.pairs.push(Pair::new(bs("0"), bs("0")));
        assert!(validate_functional(&f).is_empty());
    }

    #[test]
    fn staged_visibility() {
        let f = Functional::new(
            Mode::Turing,
            vec![Pair::new(bs(""), bs("0")), Pair::at_stage(bs("1"), bs("01"), 3)],
        );
        let idx = f.index();
        assert_eq!(idx.longest_output(&bs("1"), Some(2)), bs("0"));
        assert_eq!(idx.longest_output(&bs("1"), Some(3)), bs("01"));
        assert_eq!(idx.longest_output(&bs("1"), None), bs("01"));
    }

    #[test]
    fn json_forms() {
        let f = Functional::new(Mode::Wtt, vec![Pair::new(bs("0"), bs("00")), Pair::at_stage(bs("1"), bs("01"), 2)])
            .with_use(UseFunction::from_values(&[0, 1, 1]));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"mode":"wtt","pairs":[["0","00"],["1","01",2]],"use":{"table":{"0":0,"1":1,"2":1},"monotone":true}}"#
        );
        assert_eq!(serde_json::from_str::<Functional>(&s).unwrap(), f);
        let g: Functional = serde_json::from_str(r#"{"mode":"tt","pairs":[],"use":[0,1]}"#).unwrap();
        assert_eq!(g.use_fn.unwrap().get(1), Some(1));
    }
}
