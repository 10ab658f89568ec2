//! Compressing oracles built by concatenating shortest descriptions.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::functional::{Functional, Mode, Pair};
use crate::machine::MachineTable;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub sigma: BitString,
    pub n: usize,
    pub c: usize,
}

/// `Y = σ_1 σ_2 …` where `σ_k` is a shortest description of `x↾n_k` and
/// `c_k = |σ_1| + … + |σ_k|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressedOracle {
    pub segments: Vec<Segment>,
    pub oracle: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum CompressError {
    #[error("no n_{k} > {after} up to |x| has K(x↾n) ≤ n - c_(k-1) - {k}")]
    NoAdmissibleIndex { k: usize, after: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum DecodeError {
    #[error("no program of the machine starts at oracle position {position}")]
    NoProgram { position: usize },
}

impl CompressedOracle {
    /// `c_k + k ≤ n_k` for every segment.
    pub fn gaps_hold(&self) -> bool {
        self.segments.iter().enumerate().all(|(i, seg)| seg.c + i + 1 <= seg.n)
    }

    /// The Turing functional reading `x↾n` off `Y↾c_k` for the least `k`
    /// with `n ≤ n_k`. Only the prefixes of this one oracle are mapped.
    pub fn to_functional(&self, x: &BitString) -> Functional {
        let mut pairs = vec![Pair::new(BitString::empty(), BitString::empty())];
        let mut prev_n = 0;
        for seg in &self.segments {
            let sigma = self.oracle.prefix(seg.c);
            for n in prev_n + 1..=seg.n {
                pairs.push(Pair::new(sigma.clone(), x.prefix(n)));
            }
            prev_n = seg.n;
        }
        let mut phi = Functional::new(Mode::Turing, pairs);
        phi.normalized = true;
        phi
    }
}

/// Greedy construction: `n_k` is the least index after `n_{k-1}` with
/// `K(x↾n_k) ≤ n_k - c_{k-1} - k`, complexity taken at the horizon.
pub fn build_compressing_oracle(m: &MachineTable, x: &BitString, count: usize) -> Result<CompressedOracle, CompressError> {
    let mut segments = Vec::with_capacity(count);
    let mut oracle = BitString::empty();
    let (mut n_prev, mut c_prev) = (0usize, 0usize);
    for k in 1..=count {
        let found = (n_prev + 1..=x.len()).find_map(|n| {
            let entry = m.shortest_program(&x.prefix(n), m.horizon)?;
            (entry.program.len() + c_prev + k <= n).then(|| (n, entry.program.clone()))
        });
        let Some((n, sigma)) = found else {
            return Err(CompressError::NoAdmissibleIndex { k, after: n_prev });
        };
        oracle = oracle.concat(&sigma);
        c_prev += sigma.len();
        n_prev = n;
        segments.push(Segment { sigma, n, c: c_prev });
    }
    Ok(CompressedOracle { segments, oracle })
}

/// Splits `oracle` into consecutive programs of `m` and returns their
/// outputs. Prefix-freeness makes the split unique.
pub fn decode(m: &MachineTable, oracle: &BitString) -> Result<Vec<BitString>, DecodeError> {
    let mut out = Vec::new();
    let mut position = 0;
    while position < oracle.len() {
        let rest = oracle.suffix_from(position);
        let entry = m
            .entries
            .iter()
            .find(|e| !e.program.is_empty() && e.program.is_prefix_of(&rest))
            .ok_or(DecodeError::NoProgram { position })?;
        out.push(entry.output.clone());
        position += entry.program.len();
    }
    Ok(out)
}
