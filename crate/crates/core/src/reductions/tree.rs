//! The coding tree for a normalized test and the sub-identity-use reduction
//! compiled from it.
//!
//! Stage 0 codes only the root: `T(λ) = λ`. Stage `s + 1` maps the strings of
//! level `q_{s+1}` extending each stage-`s` node `ρ`, in lexicographic
//! order, onto the leftmost extensions of `T(ρ)` of length `p_{s+1}`, where
//! `q_{s+1} = p_s + s + 1` and `p_{s+1} = d_{q_{s+1}} - s - 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::normalize::NormalizedTest;
use crate::bits::BitString;
use crate::functional::{Functional, Mode, Pair, UseFunction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeArtifact {
    pub q: Vec<usize>,
    pub p: Vec<usize>,
    pub map: BTreeMap<BitString, BitString>,
    pub source: NormalizedTest,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum TreeError {
    #[error("the test has {levels} levels; stage 1 needs at least 2")]
    InsufficientLevels { levels: usize },
    #[error("stage {stage}: {needed} extensions of {rho} but only {available} codes")]
    CapacityExceeded { stage: usize, rho: BitString, needed: usize, available: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum TreeViolation {
    Recurrence { stage: usize },
    CodeLength { node: BitString, code: BitString },
    NotATree { first: BitString, second: BitString },
    Unmapped { stage: usize, node: BitString },
}

impl TreeArtifact {
    /// Number of stages after the root stage.
    pub fn last_stage(&self) -> usize {
        self.q.len() - 1
    }

    /// Output length decoded at stage `s`: `d_{q_s}`, and 0 for the root.
    pub fn cut(&self, s: usize) -> usize {
        if s == 0 {
            0
        } else {
            self.source.lengths[self.q[s]]
        }
    }

    pub fn cuts(&self) -> Vec<usize> {
        (0..=self.last_stage()).map(|s| self.cut(s)).collect()
    }

    /// Nodes coded at stage `s`.
    pub fn nodes(&self, s: usize) -> Vec<BitString> {
        if s == 0 {
            vec![BitString::empty()]
        } else {
            self.source.levels[self.q[s]].iter().cloned().collect()
        }
    }

    /// Code ↦ node.
    pub fn decoder(&self) -> BTreeMap<&BitString, &BitString> {
        self.map.iter().map(|(node, code)| (code, node)).collect()
    }

    pub fn validate(&self) -> Vec<TreeViolation> {
        let mut out = Vec::new();
        if self.q.first() != Some(&0) || self.p.first() != Some(&0) || self.q.len() != self.p.len() {
            out.push(TreeViolation::Recurrence { stage: 0 });
        }
        for s in 0..self.q.len().saturating_sub(1).min(self.p.len().saturating_sub(1)) {
            let q_next = self.p[s] + s + 1;
            let ok = self.q[s + 1] == q_next
                && self.source.lengths.get(q_next).is_some_and(|&d| d >= s + 1 && self.p[s + 1] == d - s - 1);
            if !ok {
                out.push(TreeViolation::Recurrence { stage: s + 1 });
            }
        }
        for s in 0..=self.last_stage() {
            for node in self.nodes(s) {
                match self.map.get(&node) {
                    None => out.push(TreeViolation::Unmapped { stage: s, node }),
                    Some(code) => {
                        if code.len() + s != node.len() {
                            out.push(TreeViolation::CodeLength { node: node.clone(), code: code.clone() });
                        }
                    }
                }
            }
        }
        let entries: Vec<_> = self.map.iter().collect();
        for (i, (a, ta)) in entries.iter().enumerate() {
            for (b, tb) in &entries[i + 1..] {
                if a.is_prefix_of(b) != ta.is_prefix_of(tb) || b.is_prefix_of(a) != tb.is_prefix_of(ta) {
                    out.push(TreeViolation::NotATree { first: (*a).clone(), second: (*b).clone() });
                }
            }
        }
        out
    }
}

/// Runs stages while the next index `q_{s+1}` names an existing level.
pub fn build_tree(n: &NormalizedTest) -> Result<TreeArtifact, TreeError> {
    if n.levels.len() < 2 {
        return Err(TreeError::InsufficientLevels { levels: n.levels.len() });
    }
    let mut q = vec![0];
    let mut p = vec![0];
    let mut map = BTreeMap::new();
    map.insert(BitString::empty(), BitString::empty());
    let mut frontier = vec![BitString::empty()];
    let mut s = 0;
    loop {
        let q_next = p[s] + s + 1;
        if q_next >= n.levels.len() {
            break;
        }
        let p_next = n.lengths[q_next] - s - 1;
        let level = &n.levels[q_next];
        let mut next_frontier = Vec::new();
        for rho in &frontier {
            let code = map[rho].clone();
            let children: Vec<&BitString> = level.iter().filter(|eta| rho.is_prefix_of(eta)).collect();
            let available = 1usize.checked_shl((p_next - code.len()) as u32).unwrap_or(usize::MAX);
            if children.len() > available {
                return Err(TreeError::CapacityExceeded {
                    stage: s + 1,
                    rho: rho.clone(),
                    needed: children.len(),
                    available,
                });
            }
            for (eta, theta) in children.into_iter().zip(code.extensions(p_next)) {
                map.insert(eta.clone(), theta);
                next_frontier.push(eta.clone());
            }
        }
        q.push(q_next);
        p.push(p_next);
        frontier = next_frontier;
        s += 1;
    }
    Ok(TreeArtifact { q, p, map, source: n.clone() })
}

/// Compiles the tree into a table functional.
///
/// An on-tree code of stage `s` yields every prefix of its node longer than
/// the previous cut, so `use(n) = p_s` for `cut(s-1) < n ≤ cut(s)`. In tt
/// mode every oracle of length `p_s` gets an output: off the tree it is the
/// longest decoded node followed by zeros. Other modes keep only the
/// on-tree pairs and diverge elsewhere.
pub fn compile_reduction(tree: &TreeArtifact, mode: Mode) -> Functional {
    let last = tree.last_stage();
    let mut pairs = vec![Pair::new(BitString::empty(), BitString::empty())];
    let mut use_values = vec![0usize];
    for s in 1..=last {
        use_values.extend(std::iter::repeat(tree.p[s]).take(tree.cut(s) - tree.cut(s - 1)));
    }

    // Decoded node for each oracle prefix, stage by stage; only needed for tt.
    let decode = tree.decoder();
    let mut decoded: BTreeMap<BitString, BitString> = BTreeMap::new();
    decoded.insert(BitString::empty(), BitString::empty());

    for s in 1..=last {
        let (lo, hi) = (tree.cut(s - 1), tree.cut(s));
        if mode == Mode::Tt {
            let mut next = BTreeMap::new();
            for sigma in BitString::all_of_length(tree.p[s]) {
                let out = match decode.get(&sigma) {
                    Some(&node) if node.len() == hi => node.clone(),
                    _ => decoded[&sigma.prefix(tree.p[s - 1])].clone(),
                };
                let padded = out.padded(hi);
                for n in lo + 1..=hi {
                    pairs.push(Pair::new(sigma.clone(), padded.prefix(n)));
                }
                next.insert(sigma, out);
            }
            decoded = next;
        } else {
            for node in tree.nodes(s) {
                let code = &tree.map[&node];
                for n in lo + 1..=hi {
                    pairs.push(Pair::new(code.clone(), node.prefix(n)));
                }
            }
        }
    }

    let mut phi = Functional::new(mode, pairs).with_use(UseFunction::from_values(&use_values));
    phi.normalized = true;
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::functional::validate_functional;
    use crate::reductions::normalize::{normalize_test, NormalForm};
    use crate::sets::StringSet;
    use crate::test_family::{Test, TestKind};

    fn set(items: &[&str]) -> StringSet {
        items.iter().map(|s| bs(s)).collect()
    }

    fn kurtz(levels: Vec<StringSet>) -> NormalizedTest {
        normalize_test(&Test::new(TestKind::Kurtz, levels), NormalForm::Kurtz).unwrap()
    }

    #[test]
    fn root_stage_and_first_recurrence() {
        let n = kurtz(vec![set(&["0"]), set(&["01"])]);
        assert_eq!(n.lengths, vec![2, 3]);
        let t = build_tree(&n).unwrap();
        assert_eq!(t.q, vec![0, 1]);
        assert_eq!(t.p, vec![0, 2]);
        assert_eq!(t.map[&bs("")], bs(""));
        // Level 1 onto all length-2 codes, lexicographically.
        assert_eq!(t.map[&bs("000")], bs("00"));
        assert_eq!(t.map[&bs("011")], bs("11"));
        assert!(t.validate().is_empty());
    }

    #[test]
    fn needs_two_levels() {
        let n = kurtz(vec![set(&["0"])]);
        assert_eq!(build_tree(&n), Err(TreeError::InsufficientLevels { levels: 1 }));
    }

    // Levels 0..=4 with d = (2,3,4,5,6) reach stage 2 at q_2 = d_1 + 1 = 4.
    fn two_stage() -> NormalizedTest {
        kurtz(vec![set(&["0"]), set(&["00"]), set(&["001"]), set(&["0010"]), set(&["00101"])])
    }

    #[test]
    fn second_stage_codes() {
        let n = two_stage();
        assert_eq!(n.lengths, vec![2, 3, 4, 5, 6]);
        let t = build_tree(&n).unwrap();
        assert_eq!(t.q, vec![0, 1, 4]);
        assert_eq!(t.p, vec![0, 2, 4]);
        assert!(t.validate().is_empty());
        for s in 0..=2 {
            let codes: std::collections::BTreeSet<_> = t.nodes(s).iter().map(|r| t.map[r].clone()).collect();
            assert_eq!(codes.len(), t.nodes(s).len(), "injective at stage {s}");
        }
    }

    #[test]
    fn compiled_functional_recovers_members() {
        let n = two_stage();
        let t = build_tree(&n).unwrap();
        for mode in [Mode::Tt, Mode::Wtt] {
            let phi = compile_reduction(&t, mode);
            assert!(validate_functional(&phi).is_empty(), "{mode:?}: {:?}", validate_functional(&phi));
            let index = phi.index();
            for x in n.members() {
                let code = &t.map[&x.prefix(t.cut(2))];
                for s in 1..=2 {
                    let a = index.apply(code, t.cut(s)).unwrap();
                    assert_eq!(a.output, x.prefix(t.cut(s)));
                    assert_eq!(a.use_len, t.cut(s) - s);
                }
            }
        }
    }

    #[test]
    fn tt_is_total_and_zero_off_the_tree() {
        // Granular form leaves codes unused at stage 1.
        let n = normalize_test(&Test::granular(vec![set(&["0"]), set(&["010"])], vec![2, 3]), NormalForm::Granular)
            .unwrap();
        let t = build_tree(&n).unwrap();
        let phi = compile_reduction(&t, Mode::Tt);
        assert!(validate_functional(&phi).is_empty());
        let index = phi.index();
        for sigma in BitString::all_of_length(t.p[1]) {
            let a = index.apply(&sigma, t.cut(1)).unwrap();
            if t.decoder().contains_key(&sigma) {
                assert_eq!(a.output, bs("010"));
            } else {
                assert_eq!(a.output, BitString::zeros(3));
            }
        }
        let wtt = compile_reduction(&t, Mode::Wtt);
        assert!(apply_off_tree_diverges(&wtt, &t));
    }

    fn apply_off_tree_diverges(phi: &Functional, t: &TreeArtifact) -> bool {
        let index = phi.index();
        BitString::all_of_length(t.p[1])
            .filter(|s| !t.decoder().contains_key(s))
            .all(|s| index.apply(&s, 1).is_none())
    }
}
