//! Online Kraft–Chaitin codeword assignment.
//!
//! Requests arrive one at a time, each asking for a codeword of a given
//! length. The free part of the unit interval is kept as a list of aligned
//! dyadic cylinders ordered by position, and every request is served from
//! the leftmost cylinder that is large enough. Splitting always leaves the
//! free cylinders with strictly increasing sizes from left to right, so the
//! leftmost fit is also the tightest fit and the free lengths are exactly
//! the binary digits of the free weight. A request therefore fails only
//! when the total requested weight would exceed 1.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::machine::{MachineEntry, MachineTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KcRequest {
    pub length: usize,
    #[serde(default)]
    pub payload: BitString,
}

impl KcRequest {
    pub fn new(length: usize, payload: BitString) -> Self {
        Self { length, payload }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum KcError {
    #[error("request {index} (length {length}) would push the requested weight above 1")]
    WeightExceeded { index: usize, length: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub codeword: BitString,
    pub payload: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KcState {
    pub assigned: Vec<Assignment>,
    pub free_weight: Dyadic,
    #[serde(skip)]
    free: Vec<BitString>,
}

impl Default for KcState {
    fn default() -> Self {
        Self::new()
    }
}

impl KcState {
    pub fn new() -> Self {
        Self { assigned: Vec::new(), free_weight: Dyadic::one(), free: vec![BitString::empty()] }
    }

    /// Free cylinders, left to right.
    pub fn free_cylinders(&self) -> &[BitString] {
        &self.free
    }

    pub fn codewords(&self) -> impl Iterator<Item = &BitString> + '_ {
        self.assigned.iter().map(|a| &a.codeword)
    }

    pub fn push(&mut self, request: &KcRequest) -> Result<&BitString, KcError> {
        let index = self.assigned.len();
        let n = request.length;
        let weight = Dyadic::pow2_neg(n);
        let Some(rest) = self.free_weight.checked_sub(&weight) else {
            return Err(KcError::WeightExceeded { index, length: n });
        };
        let pos = self
            .free
            .iter()
            .position(|c| c.len() <= n)
            .expect("free cylinders encode the free weight in binary, so a fit exists");
        let cyl = self.free.remove(pos);
        let codeword = cyl.padded(n);
        // Remainder of the cylinder after taking its leftmost length-n part:
        // cyl 0^{j-|cyl|-1} 1 for j = n, n-1, …, |cyl|+1, left to right.
        let pieces = (cyl.len() + 1..=n).rev().map(|j| cyl.padded(j - 1).child(true));
        self.free.splice(pos..pos, pieces);
        self.free_weight = rest;
        self.assigned.push(Assignment { codeword, payload: request.payload.clone() });
        Ok(&self.assigned[index].codeword)
    }

    /// Machine whose `i`-th program is the `i`-th codeword, halting at stage `i`.
    pub fn to_machine(&self) -> MachineTable {
        let entries = self
            .assigned
            .iter()
            .enumerate()
            .map(|(i, a)| MachineEntry::new(a.codeword.clone(), a.payload.clone(), i))
            .collect();
        MachineTable::new(entries, self.assigned.len().saturating_sub(1))
    }
}

/// Processes `requests` in order with the leftmost-fit policy.
pub fn kc_assign(requests: &[KcRequest]) -> Result<KcState, KcError> {
    let mut state = KcState::new();
    for r in requests {
        state.push(r)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::sets::is_prefix_free_list;

    fn lengths(ls: &[usize]) -> Vec<KcRequest> {
        ls.iter().map(|&l| KcRequest::new(l, BitString::empty())).collect()
    }

    fn codewords(state: &KcState) -> Vec<BitString> {
        state.codewords().cloned().collect()
    }

    // Independent oracle: scan the length-n strings lexicographically and
    // take the first one that is incomparable with everything assigned so far.
    fn first_free_by_scan(assigned: &[BitString], n: usize) -> Option<BitString> {
        BitString::all_of_length(n).find(|c| assigned.iter().all(|a| !a.comparable(c)))
    }

    #[test]
    fn examples() {
        let s = kc_assign(&lengths(&[1, 1])).unwrap();
        assert_eq!(codewords(&s), vec![bs("0"), bs("1")]);
        let s = kc_assign(&lengths(&[2, 1, 2])).unwrap();
        assert_eq!(codewords(&s), vec![bs("00"), bs("1"), bs("01")]);
        assert_eq!(
            kc_assign(&lengths(&[1, 1, 1])),
            Err(KcError::WeightExceeded { index: 2, length: 1 })
        );
    }

    #[test]
    fn matches_scan_on_short_sequences() {
        for ls in [vec![2, 1, 2], vec![3, 2, 3, 1], vec![1, 2, 3, 3], vec![3, 3, 3, 1, 3]] {
            let s = kc_assign(&lengths(&ls)).unwrap();
            let mut assigned = Vec::new();
            for &n in &ls {
                assigned.push(first_free_by_scan(&assigned, n).unwrap());
            }
            assert_eq!(codewords(&s), assigned, "lengths {ls:?}");
        }
    }

    #[test]
    fn zero_length_only_alone() {
        let s = kc_assign(&lengths(&[0])).unwrap();
        assert_eq!(codewords(&s), vec![bs("")]);
        assert!(kc_assign(&lengths(&[0, 5])).is_err());
        assert!(kc_assign(&lengths(&[3, 0])).is_err());
    }

    #[test]
    fn full_weight_is_always_served() {
        let s = kc_assign(&lengths(&[3, 1, 3, 2])).unwrap();
        assert!(is_prefix_free_list(&codewords(&s)));
        assert_eq!(s.free_weight, Dyadic::zero());
        assert!(s.free_cylinders().is_empty());
    }
}
