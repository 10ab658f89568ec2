//! Finite sets of strings and the Lebesgue measure of the open sets they
//! generate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::dyadic::Dyadic;

/// A finite set of strings, iterated in canonical (length, then
/// lexicographic) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StringSet {
    members: BTreeSet<BitString>,
}

impl StringSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: BitString) -> bool {
        self.members.insert(s)
    }

    pub fn remove(&mut self, s: &BitString) -> bool {
        self.members.remove(s)
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.members.contains(s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> + '_ {
        self.members.iter()
    }

    pub fn union(&self, other: &StringSet) -> StringSet {
        self.members.union(&other.members).cloned().collect()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.members.iter().map(BitString::len).max()
    }

    /// Some member is a prefix of `s`, i.e. `s` lies in the generated open set.
    pub fn covers(&self, s: &BitString) -> bool {
        (0..=s.len()).any(|k| self.members.contains(&s.prefix(k)))
    }

    /// Members with no proper prefix in the set. Generates the same open set.
    pub fn prefix_minimal(&self) -> StringSet {
        let mut out = StringSet::new();
        // Canonical order visits shorter strings first, so any prefix of a
        // member is already decided when the member is reached.
        for s in &self.members {
            if !out.covers(s) {
                out.insert(s.clone());
            }
        }
        out
    }

    /// Replaces every member by all of its extensions of length `len`
    /// (members longer than `len` are truncated away by taking their
    /// length-`len` prefix). For `len` at least the maximal member length
    /// the generated open set is unchanged.
    pub fn extended_to(&self, len: usize) -> StringSet {
        let mut out = StringSet::new();
        for s in &self.prefix_minimal().members {
            if s.len() >= len {
                out.insert(s.prefix(len));
            } else {
                out.members.extend(s.extensions(len));
            }
        }
        out
    }

    /// Sum of `2^{-|σ|}` over members, without removing redundancy.
    pub fn weight(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for s in &self.members {
            acc += Dyadic::pow2_neg(s.len());
        }
        acc
    }
}

impl FromIterator<BitString> for StringSet {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        Self { members: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a StringSet {
    type Item = &'a BitString;
    type IntoIter = std::collections::btree_set::Iter<'a, BitString>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl IntoIterator for StringSet {
    type Item = BitString;
    type IntoIter = std::collections::btree_set::IntoIter<BitString>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

/// Lebesgue measure of `⋃_{σ∈s} [σ]`.
pub fn measure(s: &StringSet) -> Dyadic {
    s.prefix_minimal().weight()
}

/// No member is a proper prefix of another.
pub fn validate_prefix_free(s: &StringSet) -> bool {
    s.iter().all(|a| !(0..a.len()).any(|k| s.contains(&a.prefix(k))))
}

/// Prefix-freeness for a list that may contain repeats (a repeat counts as
/// a violation, since the same codeword would describe two things).
pub fn is_prefix_free_list(items: &[BitString]) -> bool {
    let set: StringSet = items.iter().cloned().collect();
    set.len() == items.len() && validate_prefix_free(&set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn set(items: &[&str]) -> StringSet {
        items.iter().map(|s| bs(s)).collect()
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure(&set(&[])), Dyadic::zero());
        assert_eq!(measure(&set(&["00", "01"])), Dyadic::pow2_neg(1));
        assert_eq!(measure(&set(&["0", "01"])), Dyadic::pow2_neg(1));
        assert_eq!(measure(&set(&[""])), Dyadic::one());
    }

    #[test]
    fn prefix_free_examples() {
        assert!(validate_prefix_free(&set(&["0", "10"])));
        assert!(!validate_prefix_free(&set(&["0", "01"])));
        assert!(validate_prefix_free(&set(&[])));
        assert!(!is_prefix_free_list(&[bs("0"), bs("0")]));
    }

    #[test]
    fn extension_preserves_measure() {
        let s = set(&["1", "01", "011"]);
        let e = s.extended_to(4);
        assert_eq!(measure(&e), measure(&s));
        assert!(e.iter().all(|x| x.len() == 4));
        assert_eq!(e.len(), 12);
    }
}
