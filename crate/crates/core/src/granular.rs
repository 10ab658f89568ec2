//! Conversions among granular tests, martingales and complexity bounds.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::kc::{kc_assign, KcError, KcRequest};
use crate::machine::MachineTable;
use crate::martingale::{Martingale, MartingaleKind};
use crate::sets::{measure, StringSet};
use crate::test_family::Test;

/// `K(X↾g(i)) ≤ g(i) - i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityBound {
    pub g: Vec<usize>,
    pub deficits: Vec<usize>,
}

impl ComplexityBound {
    pub fn new(g: Vec<usize>) -> Self {
        let deficits = g.iter().enumerate().map(|(i, &gi)| gi.saturating_sub(i)).collect();
        Self { g, deficits }
    }

    /// Levels whose bound is meaningful, i.e. `g(i) ≥ i`.
    pub fn is_valid(&self) -> bool {
        self.g.iter().enumerate().all(|(i, &gi)| gi >= i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum GranularError {
    #[error("the test has no granularity for level {level}")]
    MissingGranularity { level: usize },
    #[error("granularity must be strictly increasing (index {index})")]
    NotIncreasing { index: usize },
    #[error("level {level} holds a string of length {length}, longer than g = {bound}")]
    StringTooLong { level: usize, length: usize, bound: usize },
    #[error("g asks for depth {needed} but the martingale has depth {depth}")]
    DepthExceeded { needed: usize, depth: usize },
    #[error("depth {depth} is beyond desk scale")]
    DepthTooLarge { depth: usize },
    #[error("level {level} has measure {measure}, above its bound {bound}")]
    MeasureBoundViolated { level: usize, measure: Dyadic, bound: Dyadic },
    #[error(transparent)]
    Kc(#[from] KcError),
}

const MAX_DEPTH: usize = 24;

fn check_increasing(g: &[usize]) -> Result<(), GranularError> {
    match (1..g.len()).find(|&i| g[i] <= g[i - 1]) {
        Some(index) => Err(GranularError::NotIncreasing { index }),
        None => Ok(()),
    }
}

/// Levels of a granular test refined to strings of length exactly `g(i)`.
pub fn exact_levels(t: &Test) -> Result<(Vec<StringSet>, Vec<usize>), GranularError> {
    let g = t.granularity.clone().unwrap_or_default();
    if g.len() < t.levels.len() {
        return Err(GranularError::MissingGranularity { level: g.len() });
    }
    check_increasing(&g)?;
    let mut levels = Vec::with_capacity(t.levels.len());
    for (level, set) in t.levels.iter().enumerate() {
        if let Some(length) = set.max_len().filter(|&l| l > g[level]) {
            return Err(GranularError::StringTooLong { level, length, bound: g[level] });
        }
        levels.push(set.extended_to(g[level]));
    }
    let g = g[..t.levels.len()].to_vec();
    Ok((levels, g))
}

/// `M(σ) = Σ_i μ(V_i ∩ [σ]) · 2^{|σ|}`.
///
/// Each summand is the conditional measure of one level, which is the
/// average of its leaf indicators, so the sum is exactly fair.
pub fn test_to_martingale(t: &Test) -> Result<Martingale, GranularError> {
    let (levels, g) = exact_levels(t)?;
    let depth = g.last().copied().unwrap_or(0);
    if depth > MAX_DEPTH {
        return Err(GranularError::DepthTooLarge { depth });
    }
    let mut m = Martingale::zero(depth, MartingaleKind::Martingale);
    for leaf in BitString::all_of_length(depth) {
        let hits = levels.iter().filter(|l| l.covers(&leaf)).count() as u64;
        m.set(&leaf, Dyadic::from_int(hits));
    }
    for len in (0..depth).rev() {
        for sigma in BitString::all_of_length(len) {
            let avg = (m.value(&sigma.child(false)).unwrap() + m.value(&sigma.child(true)).unwrap()).half();
            m.set(&sigma, avg);
        }
    }
    Ok(m)
}

/// `U_j = {σ : |σ| = g(j), M(σ) > j}`.
pub fn capital_level(m: &Martingale, g: &[usize], j: usize) -> StringSet {
    let threshold = Dyadic::from_int(j as u64);
    BitString::all_of_length(g[j]).filter(|s| *m.value(s).unwrap() > threshold).collect()
}

/// `V_i = U_{2^i}` with granularity `i ↦ g(2^i)`, for every `i` with
/// `2^i < |g|`. The bound `μ(V_i) ≤ M(λ) · 2^{-i}` is checked exactly.
pub fn martingale_to_test(m: &Martingale, g: &[usize]) -> Result<Test, GranularError> {
    check_increasing(g)?;
    if let Some(&needed) = g.iter().find(|&&gi| gi > m.depth()) {
        return Err(GranularError::DepthExceeded { needed, depth: m.depth() });
    }
    let mut levels = Vec::new();
    let mut lengths = Vec::new();
    let mut i = 0;
    while (1usize << i) < g.len() {
        let j = 1usize << i;
        let level = capital_level(m, g, j);
        let mu = measure(&level);
        let bound = m.initial_capital().shr(i);
        if mu > bound {
            return Err(GranularError::MeasureBoundViolated { level: i, measure: mu, bound });
        }
        levels.push(level);
        lengths.push(g[j]);
        i += 1;
    }
    Ok(Test::granular(levels, lengths))
}

/// Kraft–Chaitin requests `(g(i) - i, σ)` for every `σ ∈ V_i`.
pub fn test_to_complexity(t: &Test) -> Result<(MachineTable, ComplexityBound), GranularError> {
    let (levels, g) = exact_levels(t)?;
    let mut requests = Vec::new();
    for (i, level) in levels.iter().enumerate() {
        for sigma in level {
            let Some(length) = sigma.len().checked_sub(i) else {
                // Only reachable when μ(V_i) > 2^{-i}.
                let mu = measure(level);
                return Err(GranularError::MeasureBoundViolated { level: i, measure: mu, bound: Dyadic::pow2_neg(i) });
            };
            requests.push(KcRequest::new(length, sigma.clone()));
        }
    }
    let state = kc_assign(&requests)?;
    Ok((state.to_machine(), ComplexityBound::new(g)))
}

/// `V_i = {σ : |σ| = g(i), K(σ) ≤ g(i) - i}` with `K` taken at the horizon.
pub fn complexity_to_test(m: &MachineTable, g: &[usize]) -> Result<Test, GranularError> {
    check_increasing(g)?;
    let mut levels = Vec::with_capacity(g.len());
    for (i, &gi) in g.iter().enumerate() {
        let level: StringSet = match gi.checked_sub(i) {
            None => StringSet::new(),
            Some(budget) => m
                .halted_by(m.horizon)
                .filter(|e| e.output.len() == gi && e.program.len() <= budget)
                .map(|e| e.output.clone())
                .collect(),
        };
        let mu = measure(&level);
        if mu > Dyadic::pow2_neg(i) {
            return Err(GranularError::MeasureBoundViolated { level: i, measure: mu, bound: Dyadic::pow2_neg(i) });
        }
        levels.push(level);
    }
    Ok(Test::granular(levels, g.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::machine::{k_at_stage, MachineEntry};
    use crate::martingale::validate_martingale;

    fn set(items: &[&str]) -> StringSet {
        items.iter().map(|s| bs(s)).collect()
    }

    #[test]
    fn single_level_martingale() {
        let t = Test::granular(vec![set(&["00"])], vec![2]);
        let m = test_to_martingale(&t).unwrap();
        assert!(validate_martingale(&m).is_empty());
        assert_eq!(m.value(&bs("")), Some(&Dyadic::pow2_neg(2)));
        assert_eq!(m.value(&bs("0")), Some(&Dyadic::pow2_neg(1)));
        assert_eq!(m.value(&bs("00")), Some(&Dyadic::one()));
        assert_eq!(m.value(&bs("01")), Some(&Dyadic::zero()));
        assert_eq!(m.value(&bs("1")), Some(&Dyadic::zero()));

        let empty = test_to_martingale(&Test::granular(vec![], vec![])).unwrap();
        assert_eq!(empty.initial_capital(), &Dyadic::zero());
    }

    #[test]
    fn members_gain_capital() {
        let t = Test::granular(vec![set(&["0"]), set(&["01"]), set(&["010"])], vec![1, 2, 3]);
        let m = test_to_martingale(&t).unwrap();
        assert!(validate_martingale(&m).is_empty());
        let x = bs("010");
        for i in 0..3 {
            assert!(*m.value(&x.prefix(i + 1)).unwrap() >= Dyadic::from_int(i as u64));
        }
        let v = martingale_to_test(&m, &[1, 2, 3]).unwrap();
        assert_eq!(v.levels.len(), 2);
        assert!(v.levels[0].contains(&x.prefix(2)));
        assert!(v.levels[1].contains(&x.prefix(3)));
    }

    #[test]
    fn martingale_levels_from_capital() {
        let mut m = Martingale::zero(1, MartingaleKind::Martingale);
        m.set(&bs(""), Dyadic::one());
        m.set(&bs("0"), Dyadic::from_int(2));
        let t = martingale_to_test(&m, &[0, 1]).unwrap();
        assert_eq!(t.levels, vec![set(&["0"])]);
        assert_eq!(t.granularity, Some(vec![1]));

        let zero = Martingale::zero(3, MartingaleKind::Martingale);
        let t = martingale_to_test(&zero, &[0, 1, 2, 3]).unwrap();
        assert!(t.levels.iter().all(StringSet::is_empty));
        assert!(matches!(martingale_to_test(&zero, &[4]), Err(GranularError::DepthExceeded { .. })));
    }

    #[test]
    fn complexity_round_trip() {
        let t = Test::granular(vec![StringSet::new(), set(&["00"])], vec![1, 2]);
        let (m, bound) = test_to_complexity(&t).unwrap();
        assert_eq!(bound.deficits, vec![1, 1]);
        assert_eq!(m.entries.len(), 1);
        assert_eq!(m.entries[0].program.len(), 1);
        assert_eq!(k_at_stage(&m, &bs("00"), m.horizon).unwrap(), Some(1));
        let back = complexity_to_test(&m, &[1, 2]).unwrap();
        assert!(back.levels[1].contains(&bs("00")));

        let (empty, _) = test_to_complexity(&Test::granular(vec![], vec![])).unwrap();
        assert!(empty.entries.is_empty());
    }

    #[test]
    fn levels_from_a_machine() {
        let m = MachineTable::new(vec![MachineEntry::new(bs("0"), bs("00"), 1)], 1);
        let t = complexity_to_test(&m, &[2]).unwrap();
        assert_eq!(t.levels[0], set(&["00"]));
        let t = complexity_to_test(&m, &[1, 2, 3]).unwrap();
        assert_eq!(t.levels, vec![StringSet::new(), set(&["00"]), StringSet::new()]);
        assert!(complexity_to_test(&MachineTable::empty(0), &[1, 2]).unwrap().levels.iter().all(StringSet::is_empty));
    }

    #[test]
    fn overweight_tests_are_refused_by_kraft_chaitin() {
        // μ(V_0) = 1 and μ(V_1) = 1/2 ask for total weight 2.
        let t = Test::granular(vec![set(&["0", "1"]), set(&["00", "01"])], vec![1, 2]);
        assert!(matches!(test_to_complexity(&t), Err(GranularError::Kc(_))));
    }
}
