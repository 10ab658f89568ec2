//! Interval plans: consecutive blocks of naturals carrying enough weight
//! under `2^{-f}` to beat a Kraft bound.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::functional::UseFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMode {
    /// `Σ_{i ∈ [m_e, m_{e+1})} 2^{-f(i)} > 2`.
    SumGt2,
    /// `Σ_{s ∈ (n_e, n_{e+1}]} (s - n_e) · 2^{-f(s)} > 2^e`.
    WeightedGt2e,
}

impl std::str::FromStr for PlanMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum_gt_2" => Ok(PlanMode::SumGt2),
            "weighted_gt_2e" => Ok(PlanMode::WeightedGt2e),
            other => Err(format!("unknown plan mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPlan {
    pub cuts: Vec<usize>,
    pub mode: PlanMode,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum IntervalError {
    #[error("partial sums for interval {interval} never cross the threshold within the {domain} values of f")]
    HorizonExhausted { interval: usize, domain: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum PlanViolation {
    CutsNotIncreasing { index: usize },
    BelowThreshold { interval: usize, total: Dyadic },
    UseUndefined { n: usize },
}

impl IntervalPlan {
    pub fn count(&self) -> usize {
        self.cuts.len().saturating_sub(1)
    }

    /// Requirement `e` works in `[cuts[e], cuts[e+1])`.
    pub fn interval(&self, e: usize) -> std::ops::Range<usize> {
        self.cuts[e]..self.cuts[e + 1]
    }

    pub fn end(&self) -> usize {
        self.cuts.last().copied().unwrap_or(0)
    }

    /// Weighted sum of interval `e` in this plan's mode.
    pub fn total(&self, f: &UseFunction, e: usize) -> Result<Dyadic, PlanViolation> {
        let (lo, hi) = (self.cuts[e], self.cuts[e + 1]);
        let mut acc = Dyadic::zero();
        match self.mode {
            PlanMode::SumGt2 => {
                for i in lo..hi {
                    acc += Dyadic::pow2_neg(f.get(i).ok_or(PlanViolation::UseUndefined { n: i })?);
                }
            }
            PlanMode::WeightedGt2e => {
                for s in lo + 1..=hi {
                    let w = Dyadic::pow2_neg(f.get(s).ok_or(PlanViolation::UseUndefined { n: s })?);
                    acc += w.mul_int((s - lo) as u64);
                }
            }
        }
        Ok(acc)
    }

    pub fn threshold(&self, e: usize) -> Dyadic {
        threshold(self.mode, e)
    }

    pub fn validate(&self, f: &UseFunction) -> Vec<PlanViolation> {
        let mut out = Vec::new();
        for index in 1..self.cuts.len() {
            if self.cuts[index] <= self.cuts[index - 1] {
                out.push(PlanViolation::CutsNotIncreasing { index });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for e in 0..self.count() {
            match self.total(f, e) {
                Ok(total) if total <= self.threshold(e) => {
                    out.push(PlanViolation::BelowThreshold { interval: e, total })
                }
                Ok(_) => {}
                Err(v) => out.push(v),
            }
        }
        out
    }
}

fn threshold(mode: PlanMode, e: usize) -> Dyadic {
    match mode {
        PlanMode::SumGt2 => Dyadic::from_int(2),
        PlanMode::WeightedGt2e => Dyadic::one().shl(e),
    }
}

/// Greedy plan from `0`: each cut is the least point at which the running
/// sum of the current interval exceeds its threshold.
pub fn find_intervals(f: &UseFunction, count: usize, mode: PlanMode) -> Result<IntervalPlan, IntervalError> {
    let domain = f.contiguous_len();
    let mut cuts = vec![0];
    for e in 0..count {
        let lo = *cuts.last().unwrap();
        let threshold = threshold(mode, e);
        let mut acc = Dyadic::zero();
        let mut next = None;
        match mode {
            PlanMode::SumGt2 => {
                for i in lo..domain {
                    acc += Dyadic::pow2_neg(f.get(i).unwrap());
                    if acc > threshold {
                        next = Some(i + 1);
                        break;
                    }
                }
            }
            PlanMode::WeightedGt2e => {
                for s in lo + 1..domain {
                    acc += Dyadic::pow2_neg(f.get(s).unwrap()).mul_int((s - lo) as u64);
                    if acc > threshold {
                        next = Some(s);
                        break;
                    }
                }
            }
        }
        match next {
            Some(cut) => cuts.push(cut),
            None => return Err(IntervalError::HorizonExhausted { interval: e, domain }),
        }
    }
    Ok(IntervalPlan { cuts, mode })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zero_sum_plan() {
        let f = UseFunction::constant(0, 20);
        let plan = find_intervals(&f, 1, PlanMode::SumGt2).unwrap();
        assert_eq!(plan.cuts, vec![0, 3]);
        assert!(plan.validate(&f).is_empty());
    }

    #[test]
    fn identity_use_never_crosses() {
        let f = UseFunction::from_values(&(0..40).collect::<Vec<_>>());
        assert_eq!(
            find_intervals(&f, 1, PlanMode::SumGt2),
            Err(IntervalError::HorizonExhausted { interval: 0, domain: 40 })
        );
    }

    #[test]
    fn weighted_plan() {
        let f = UseFunction::constant(0, 20);
        let plan = find_intervals(&f, 3, PlanMode::WeightedGt2e).unwrap();
        // 1 + 2 > 1; then 1 + 2 > 2; then 1 + 2 + 3 > 4.
        assert_eq!(plan.cuts, vec![0, 2, 4, 7]);
        assert!(plan.validate(&f).is_empty());
        let short = IntervalPlan { cuts: vec![0, 1], mode: PlanMode::WeightedGt2e };
        assert!(matches!(short.validate(&f)[..], [PlanViolation::BelowThreshold { interval: 0, .. }]));
    }
}
