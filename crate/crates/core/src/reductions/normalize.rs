//! Normal forms for finite tests: one string length per level, strictly
//! increasing lengths, nested levels, and for Kurtz form exactly
//! `2^{d_i - i}` strings at level `i`.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::sets::{measure, StringSet};
use crate::test_family::{Test, TestKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalForm {
    Kurtz,
    Granular,
}

impl std::str::FromStr for NormalForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kurtz" => Ok(NormalForm::Kurtz),
            "granular" => Ok(NormalForm::Granular),
            other => Err(format!("unknown normal form {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedTest {
    pub form: NormalForm,
    pub levels: Vec<StringSet>,
    pub lengths: Vec<usize>,
    /// Strings added to reach the Kurtz cardinality, per level.
    #[serde(default)]
    pub padding: Vec<StringSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum NormalizeError {
    #[error("level {level} has measure {measure}, above 2^-{level}")]
    Unnormalizable { level: usize, measure: Dyadic },
    #[error("level {level} holds a string of length {length}, longer than its bound {bound}")]
    LevelTooCoarse { level: usize, length: usize, bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum NormalViolation {
    LengthsMismatch { levels: usize, lengths: usize },
    FirstLengthTooSmall,
    LengthsNotIncreasing { level: usize },
    WrongLength { level: usize, string: BitString },
    TooMany { level: usize, count: usize },
    WrongCount { level: usize, count: usize, expected: usize },
    NotNested { level: usize, string: BitString },
}

impl NormalizedTest {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Strings of the last level; by nesting these are the members of every
    /// level's cylinder intersection at desk scale.
    pub fn members(&self) -> impl Iterator<Item = &BitString> + '_ {
        self.levels.last().into_iter().flat_map(StringSet::iter)
    }

    /// Level `i` without its padding.
    pub fn original(&self, i: usize) -> StringSet {
        match self.padding.get(i) {
            Some(pad) => self.levels[i].iter().filter(|s| !pad.contains(s)).cloned().collect(),
            None => self.levels[i].clone(),
        }
    }

    pub fn to_test(&self) -> Test {
        match self.form {
            NormalForm::Kurtz => Test::new(TestKind::Kurtz, self.levels.clone()),
            NormalForm::Granular => Test::granular(self.levels.clone(), self.lengths.clone()),
        }
    }

    pub fn validate(&self) -> Vec<NormalViolation> {
        let mut out = Vec::new();
        if self.levels.len() != self.lengths.len() {
            out.push(NormalViolation::LengthsMismatch {
                levels: self.levels.len(),
                lengths: self.lengths.len(),
            });
            return out;
        }
        if self.lengths.first().is_some_and(|&d| d <= 1) {
            out.push(NormalViolation::FirstLengthTooSmall);
        }
        for (level, set) in self.levels.iter().enumerate() {
            let d = self.lengths[level];
            if level > 0 && d <= self.lengths[level - 1] {
                out.push(NormalViolation::LengthsNotIncreasing { level });
            }
            if let Some(s) = set.iter().find(|s| s.len() != d) {
                out.push(NormalViolation::WrongLength { level, string: s.clone() });
            }
            let cap = d.checked_sub(level).map(|e| 1u128 << e.min(127)).unwrap_or(0);
            let count = set.len();
            if count as u128 > cap {
                out.push(NormalViolation::TooMany { level, count });
            } else if self.form == NormalForm::Kurtz && count as u128 != cap {
                out.push(NormalViolation::WrongCount { level, count, expected: cap as usize });
            }
            if level > 0 {
                let prev = &self.levels[level - 1];
                if let Some(s) = set.iter().find(|s| !prev.covers(s)) {
                    out.push(NormalViolation::NotNested { level, string: s.clone() });
                }
            }
        }
        out
    }
}

/// Rewrites `t` into normal form without losing any real from the
/// intersection of its levels.
///
/// Lengths are `d_0 = max(2, ℓ_0)` and `d_i = max(ℓ_i, d_{i-1} + 1)` where
/// `ℓ_i` is the longest string at level `i`. Each level is refined to length
/// `d_i` and cut down to the cylinders of the previous level. Kurtz form
/// then pads with the least unused extensions of the previous level.
pub fn normalize_test(t: &Test, form: NormalForm) -> Result<NormalizedTest, NormalizeError> {
    for (level, set) in t.levels.iter().enumerate() {
        let m = measure(set);
        if m > Dyadic::pow2_neg(level) {
            return Err(NormalizeError::Unnormalizable { level, measure: m });
        }
        if let Some(g) = &t.granularity {
            if let (Some(&bound), Some(length)) = (g.get(level), set.max_len()) {
                if length > bound {
                    return Err(NormalizeError::LevelTooCoarse { level, length, bound });
                }
            }
        }
    }

    let mut levels: Vec<StringSet> = Vec::with_capacity(t.levels.len());
    let mut lengths = Vec::with_capacity(t.levels.len());
    let mut padding = Vec::with_capacity(t.levels.len());
    for (i, set) in t.levels.iter().enumerate() {
        let longest = set.max_len().unwrap_or(0);
        let d = match lengths.last() {
            None => longest.max(2),
            Some(&prev) => longest.max(prev + 1),
        };
        let mut level = set.extended_to(d);
        if let Some(prev) = levels.last() {
            level = level.iter().filter(|s| prev.covers(s)).cloned().collect();
        }
        let mut pad = StringSet::new();
        if form == NormalForm::Kurtz {
            let target = 1usize << (d - i);
            let candidates: Vec<BitString> = match levels.last() {
                None => BitString::all_of_length(d).collect(),
                Some(prev) => prev.iter().flat_map(|p| p.extensions(d)).collect(),
            };
            for c in candidates {
                if level.len() >= target {
                    break;
                }
                if !level.contains(&c) {
                    level.insert(c.clone());
                    pad.insert(c);
                }
            }
        }
        levels.push(level);
        lengths.push(d);
        padding.push(pad);
    }
    Ok(NormalizedTest { form, levels, lengths, padding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn set(items: &[&str]) -> StringSet {
        items.iter().map(|s| bs(s)).collect()
    }

    #[test]
    fn pads_to_kurtz_cardinality() {
        let t = Test::new(TestKind::Kurtz, vec![set(&["0"]), set(&["01"])]);
        let n = normalize_test(&t, NormalForm::Kurtz).unwrap();
        assert_eq!(n.lengths, vec![2, 3]);
        assert_eq!(n.levels[0], set(&["00", "01", "10", "11"]));
        assert_eq!(n.levels[1], set(&["000", "001", "010", "011"]));
        assert_eq!(n.padding[1], set(&["000", "001"]));
        assert_eq!(n.original(1), set(&["010", "011"]));
        assert!(n.validate().is_empty());

        // Every 3-bit string in both original cylinders is still a member.
        for x in BitString::all_of_length(3) {
            if t.levels.iter().all(|l| l.covers(&x)) {
                assert!(n.levels.iter().all(|l| l.covers(&x)), "{x}");
            }
        }
    }

    #[test]
    fn normal_input_is_unchanged() {
        let t = Test::new(TestKind::Kurtz, vec![set(&["00", "01", "10", "11"]), set(&["000", "001", "010", "011"])]);
        let n = normalize_test(&t, NormalForm::Kurtz).unwrap();
        assert_eq!(n.levels, t.levels);
        assert!(n.padding.iter().all(StringSet::is_empty));
        let again = normalize_test(&n.to_test(), NormalForm::Kurtz).unwrap();
        assert_eq!(again, n);
    }

    #[test]
    fn rejects_heavy_levels() {
        let t = Test::new(TestKind::Ml, vec![set(&[""]), set(&["0"]), set(&["1"])]);
        assert!(matches!(
            normalize_test(&t, NormalForm::Granular),
            Err(NormalizeError::Unnormalizable { level: 2, .. })
        ));
        let t = Test::granular(vec![set(&["000"])], vec![2]);
        assert!(matches!(normalize_test(&t, NormalForm::Granular), Err(NormalizeError::LevelTooCoarse { .. })));
    }

    #[test]
    fn granular_form_does_not_pad() {
        let t = Test::granular(vec![set(&["0"]), set(&["0101"])], vec![1, 4]);
        let n = normalize_test(&t, NormalForm::Granular).unwrap();
        assert_eq!(n.lengths, vec![2, 4]);
        assert_eq!(n.levels[0], set(&["00", "01"]));
        assert_eq!(n.levels[1], set(&["0101"]));
        assert!(n.validate().is_empty());
    }
}
