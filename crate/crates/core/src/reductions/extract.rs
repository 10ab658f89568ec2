//! Tests read off functionals whose use dips below the identity.

use serde::Serialize;

use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::functional::{Functional, Mode, UseFunction};
use crate::sets::{measure, StringSet};
use crate::test_family::{Test, TestKind};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum ExtractError {
    #[error("level {level} has measure {measure}, above 2^-{level}; the functional is inconsistent")]
    MeasureBoundViolated { level: usize, measure: Dyadic },
    #[error("level {level}: use {use_len} at cut {n} exceeds {n} - {level}")]
    UseBoundViolated { level: usize, n: usize, use_len: usize },
    #[error("the use function is undefined at cut {n}")]
    UseUndefined { n: usize },
    #[error("cut points must be strictly increasing (level {level})")]
    CutsNotIncreasing { level: usize },
    #[error("bounded extraction needs a tt or wtt functional with a use function")]
    NeedsBoundedUse,
}

/// `V_k = {τ : (σ, τ) ∈ Φ, |τ| > k + |σ|}` for `k < depth`.
pub fn extract_ml_test(phi: &Functional, depth: usize) -> Result<Test, ExtractError> {
    let mut levels = vec![StringSet::new(); depth];
    for p in &phi.pairs {
        for (k, level) in levels.iter_mut().enumerate() {
            if p.tau.len() > k + p.sigma.len() {
                level.insert(p.tau.clone());
            }
        }
    }
    check_measures(&levels)?;
    Ok(Test::new(TestKind::Ml, levels))
}

/// Least cuts with `f(n_i) ≤ n_i - i`, scanning the use table in order.
pub fn scan_cut_points(f: &UseFunction) -> Vec<usize> {
    let mut cuts = Vec::new();
    for (&n, &u) in &f.table {
        if u + cuts.len() <= n {
            cuts.push(n);
        }
    }
    cuts
}

/// `D_i = {τ↾n_i : (σ, τ) ∈ Φ, |τ| ≥ n_i, |σ| ≤ f(n_i)}`.
///
/// An empty `cut_points` is replaced by [`scan_cut_points`]. The length
/// bound on `σ` keeps the witnesses of `D_i` inside the `2^{f(n_i)}` oracle
/// prefixes of length `f(n_i)`, so `μ(D_i) ≤ 2^{f(n_i) - n_i} ≤ 2^{-i}`.
pub fn extract_bounded_test(phi: &Functional, cut_points: &[usize]) -> Result<Test, ExtractError> {
    let f = match (&phi.mode, &phi.use_fn) {
        (Mode::Tt | Mode::Wtt, Some(f)) => f,
        _ => return Err(ExtractError::NeedsBoundedUse),
    };
    let cuts: Vec<usize> = if cut_points.is_empty() { scan_cut_points(f) } else { cut_points.to_vec() };
    let mut levels = Vec::with_capacity(cuts.len());
    for (level, &n) in cuts.iter().enumerate() {
        if level > 0 && n <= cuts[level - 1] {
            return Err(ExtractError::CutsNotIncreasing { level });
        }
        let use_len = f.get(n).ok_or(ExtractError::UseUndefined { n })?;
        if use_len + level > n {
            return Err(ExtractError::UseBoundViolated { level, n, use_len });
        }
        let d: StringSet = phi
            .pairs
            .iter()
            .filter(|p| p.tau.len() >= n && p.sigma.len() <= use_len)
            .map(|p| p.tau.prefix(n))
            .collect();
        levels.push(d);
    }
    check_measures(&levels)?;
    Ok(match phi.mode {
        Mode::Tt => Test::new(TestKind::Kurtz, levels),
        _ => Test::granular(levels, cuts),
    })
}

/// Oracle prefixes witnessing level `i`, padded to the common length `f(n_i)`.
pub fn witness_set(phi: &Functional, n: usize, use_len: usize) -> StringSet {
    phi.pairs
        .iter()
        .filter(|p| p.tau.len() >= n && p.sigma.len() <= use_len)
        .flat_map(|p| p.sigma.extensions(use_len).collect::<Vec<BitString>>())
        .collect()
}

fn check_measures(levels: &[StringSet]) -> Result<(), ExtractError> {
    for (level, set) in levels.iter().enumerate() {
        let m = measure(set);
        if m > Dyadic::pow2_neg(level) {
            return Err(ExtractError::MeasureBoundViolated { level, measure: m });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::functional::Pair;

    fn pairs(items: &[(&str, &str)]) -> Vec<Pair> {
        items.iter().map(|(s, t)| Pair::new(bs(s), bs(t))).collect()
    }

    #[test]
    fn ml_levels_use_strict_inequality() {
        let phi = Functional::new(Mode::Turing, pairs(&[("0", "000")]));
        let t = extract_ml_test(&phi, 3).unwrap();
        assert_eq!(t.levels[0], [bs("000")].into_iter().collect());
        assert_eq!(t.levels[1], [bs("000")].into_iter().collect());
        assert!(t.levels[2].is_empty());
        let empty = extract_ml_test(&Functional::new(Mode::Turing, vec![]), 4).unwrap();
        assert!(empty.levels.iter().all(StringSet::is_empty));
    }

    #[test]
    fn inconsistent_functional_breaks_the_bound() {
        // Incomparable outputs on one oracle prefix.
        let phi = Functional::new(Mode::Turing, pairs(&[("", "00"), ("", "01"), ("", "10")]));
        assert!(matches!(extract_ml_test(&phi, 2), Err(ExtractError::MeasureBoundViolated { level: 1, .. })));
    }

    fn wtt_example() -> Functional {
        let mut f = UseFunction::default();
        f.table.insert(0, 0);
        f.table.insert(2, 1);
        f.monotone = true;
        Functional::new(Mode::Wtt, pairs(&[("0", "00"), ("1", "01")])).with_use(f)
    }

    #[test]
    fn bounded_levels() {
        let t = extract_bounded_test(&wtt_example(), &[0, 2]).unwrap();
        assert_eq!(t.kind, TestKind::Granular);
        assert!(t.levels[0].is_empty());
        assert_eq!(t.levels[1], [bs("00"), bs("01")].into_iter().collect());
        assert_eq!(measure(&t.levels[1]), Dyadic::pow2_neg(1));
        assert_eq!(witness_set(&wtt_example(), 2, 1).len(), 2);
        // The scanner finds the same cuts.
        assert_eq!(scan_cut_points(wtt_example().use_fn.as_ref().unwrap()), vec![0, 2]);
    }

    #[test]
    fn bounded_errors() {
        let phi = Functional::new(Mode::Tt, pairs(&[("00", "00")])).with_use(UseFunction::from_values(&[0, 1, 2]));
        assert_eq!(
            extract_bounded_test(&phi, &[0, 2]),
            Err(ExtractError::UseBoundViolated { level: 1, n: 2, use_len: 2 })
        );
        let empty = Functional::new(Mode::Tt, vec![]).with_use(UseFunction::from_values(&[0, 0, 1]));
        let t = extract_bounded_test(&empty, &[]).unwrap();
        assert_eq!(t.kind, TestKind::Kurtz);
        assert!(t.levels.iter().all(StringSet::is_empty));
        let turing = Functional::new(Mode::Turing, vec![]);
        assert_eq!(extract_bounded_test(&turing, &[1]), Err(ExtractError::NeedsBoundedUse));
    }
}
