//! Finite prefix-free machines with staged halting.
//!
//! A `MachineTable` lists `(program, output, halt_stage)` triples up to a
//! horizon. It is the only source of stage complexity `K_s`, of the
//! halting-probability approximations `Ω_s`, and of settling times.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::dyadic::Dyadic;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MachineEntry {
    pub program: BitString,
    pub output: BitString,
    pub halt_stage: usize,
}

impl MachineEntry {
    pub fn new(program: BitString, output: BitString, halt_stage: usize) -> Self {
        Self { program, output, halt_stage }
    }
}

impl Serialize for MachineEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(3)?;
        t.serialize_element(&self.program)?;
        t.serialize_element(&self.output)?;
        t.serialize_element(&self.halt_stage)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for MachineEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntryVisitor;
        impl<'de> Visitor<'de> for EntryVisitor {
            type Value = MachineEntry;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("[program, output, halt_stage]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<MachineEntry, A::Error> {
                let program = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let output = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let halt_stage = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(4, &self));
                }
                Ok(MachineEntry { program, output, halt_stage })
            }
        }
        deserializer.deserialize_seq(EntryVisitor)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineTable {
    pub entries: Vec<MachineEntry>,
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum MachineError {
    #[error("stage {stage} is beyond the machine horizon {horizon}")]
    StageBeyondHorizon { stage: usize, horizon: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum MachineViolation {
    NotPrefixFree { first: BitString, second: BitString },
    KraftExceeded { weight: Dyadic },
    StageBeyondHorizon { program: BitString, stage: usize },
}

impl MachineTable {
    pub fn new(entries: Vec<MachineEntry>, horizon: usize) -> Self {
        Self { entries, horizon }
    }

    pub fn empty(horizon: usize) -> Self {
        Self { entries: Vec::new(), horizon }
    }

    /// `Σ 2^{-|p|}` over every program in the table.
    pub fn weight(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for e in &self.entries {
            acc += Dyadic::pow2_neg(e.program.len());
        }
        acc
    }

    pub fn validate(&self) -> Vec<MachineViolation> {
        let mut out = Vec::new();
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                if a.program.comparable(&b.program) {
                    out.push(MachineViolation::NotPrefixFree {
                        first: a.program.clone(),
                        second: b.program.clone(),
                    });
                }
            }
        }
        let weight = self.weight();
        if weight > Dyadic::one() {
            out.push(MachineViolation::KraftExceeded { weight });
        }
        for e in &self.entries {
            if e.halt_stage > self.horizon {
                out.push(MachineViolation::StageBeyondHorizon {
                    program: e.program.clone(),
                    stage: e.halt_stage,
                });
            }
        }
        out
    }

    fn check_stage(&self, s: usize) -> Result<(), MachineError> {
        if s > self.horizon {
            Err(MachineError::StageBeyondHorizon { stage: s, horizon: self.horizon })
        } else {
            Ok(())
        }
    }

    /// Entries halted by stage `s`.
    pub fn halted_by(&self, s: usize) -> impl Iterator<Item = &MachineEntry> + '_ {
        self.entries.iter().filter(move |e| e.halt_stage <= s)
    }

    /// Shortest program for `sigma` halted by stage `s`; ties go to the
    /// canonically least program.
    pub fn shortest_program(&self, sigma: &BitString, s: usize) -> Option<&MachineEntry> {
        self.halted_by(s)
            .filter(|e| &e.output == sigma)
            .min_by(|a, b| a.program.cmp(&b.program))
    }

    /// `K_s(σ)` with stages past the horizon clamped to the final table.
    pub fn k_clamped(&self, sigma: &BitString, s: usize) -> Option<usize> {
        self.shortest_program(sigma, s.min(self.horizon)).map(|e| e.program.len())
    }

    pub fn omega_clamped(&self, s: usize) -> Dyadic {
        let mut acc = Dyadic::zero();
        for e in self.halted_by(s.min(self.horizon)) {
            acc += Dyadic::pow2_neg(e.program.len());
        }
        acc
    }

    pub fn final_omega(&self) -> Dyadic {
        self.omega_clamped(self.horizon)
    }
}

/// `K_s(σ)`: length of the shortest program halted by stage `s` with output
/// `σ`; `None` stands for infinity.
pub fn k_at_stage(m: &MachineTable, sigma: &BitString, s: usize) -> Result<Option<usize>, MachineError> {
    m.check_stage(s)?;
    Ok(m.k_clamped(sigma, s))
}

/// `Ω_s = Σ 2^{-|p|}` over programs halted by stage `s`.
pub fn omega_at_stage(m: &MachineTable, s: usize) -> Result<Dyadic, MachineError> {
    m.check_stage(s)?;
    Ok(m.omega_clamped(s))
}

/// Least stage from which the first `t` bits of `Ω_s` agree with those of
/// `Ω_horizon` at every later stage up to the horizon.
///
/// The final stage always agrees with itself, so the result is at most the
/// horizon.
pub fn settling_time(m: &MachineTable, t: usize) -> usize {
    let target = m.final_omega().binary_prefix(t);
    let mut s = m.horizon;
    while s > 0 && m.omega_clamped(s - 1).binary_prefix(t) == target {
        s -= 1;
    }
    s
}

/// Seeded fixture: a prefix-free table with programs of length
/// `1..=max_program_len` and halting stages in `0..=horizon`.
pub fn gen_machine(seed: u64, max_program_len: usize, horizon: usize) -> MachineTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = MachineTable::empty(horizon);
    if max_program_len == 0 {
        return table;
    }
    let capacity = 1usize << max_program_len.min(5);
    let target = rng.gen_range(1..=capacity.min(16));
    let mut attempts = 0;
    while table.entries.len() < target && attempts < 64 {
        attempts += 1;
        let len = rng.gen_range(1..=max_program_len);
        let program: BitString = (0..len).map(|_| rng.gen_bool(0.5)).collect();
        if table.entries.iter().any(|e| e.program.comparable(&program)) {
            continue;
        }
        let out_len = rng.gen_range(0..=max_program_len + 2);
        let output: BitString = (0..out_len).map(|_| rng.gen_bool(0.5)).collect();
        let halt_stage = rng.gen_range(0..=horizon);
        table.entries.push(MachineEntry::new(program, output, halt_stage));
    }
    table
}

/// Non-decreasing dyadic approximations of a left-c.e. real; the value at
/// the last stage plays the role of the limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Approximation {
    pub stages: Vec<Dyadic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ApproximationViolation {
    Empty,
    Decreasing { stage: usize },
    OutOfRange { stage: usize },
}

impl Approximation {
    pub fn new(stages: Vec<Dyadic>) -> Self {
        Self { stages }
    }

    pub fn horizon(&self) -> usize {
        self.stages.len().saturating_sub(1)
    }

    pub fn value(&self, s: usize) -> &Dyadic {
        &self.stages[s.min(self.horizon())]
    }

    /// `X_s↾n`: first `n` bits of the stage-`s` value.
    pub fn prefix(&self, s: usize, n: usize) -> BitString {
        self.value(s).binary_prefix(n)
    }

    pub fn final_prefix(&self, n: usize) -> BitString {
        self.prefix(self.horizon(), n)
    }

    pub fn validate(&self) -> Vec<ApproximationViolation> {
        let mut out = Vec::new();
        if self.stages.is_empty() {
            out.push(ApproximationViolation::Empty);
        }
        for (stage, v) in self.stages.iter().enumerate() {
            if *v >= Dyadic::one() {
                out.push(ApproximationViolation::OutOfRange { stage });
            }
            if stage > 0 && *v < self.stages[stage - 1] {
                out.push(ApproximationViolation::Decreasing { stage });
            }
        }
        out
    }
}
