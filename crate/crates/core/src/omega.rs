//! Computing a left-c.e. real from Ω through settling times.
//!
//! At stage `s + 1`, for each `n ≤ s`, the Solovay test `J` receives
//! `Ω_{s+1}↾K_{s+1}(X_{s+1}↾n)` when either the prefix is stable and its
//! complexity dropped (clause a) or the prefix changed and now has a
//! description (clause b).
//!
//! To recover `X↾n` we scan `t`, take `m_t` the settling time of `Ω↾t`, and
//! accept `X_{m_t}↾n` at the first `t` with `t ≥ K_{m_t}(X_{m_t}↾n)` and
//! `m_t ≥ t_0`.
//!
//! Clause (b) charges the new prefix, whose description may be longer than
//! `t`, so `J` alone does not witness a late change of an accepted prefix.
//! Retirements close that gap: when `X_s↾n` is abandoned at stage `s + 1`
//! the string `Ω_{s+1}↾K_s(X_s↾n)` is recorded. Each abandoned string is
//! abandoned once, so retirements weigh at most the machine weight too. They
//! count towards `t_0` under [`HitSet::WithRetirements`] and never enter `J`.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::dyadic::Dyadic;
use crate::machine::{settling_time, Approximation, MachineTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolovayItem {
    pub stage: usize,
    pub entry: BitString,
    pub clause: Clause,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Retirement {
    pub stage: usize,
    pub entry: BitString,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolovayTest {
    pub items: Vec<SolovayItem>,
    pub weight: Dyadic,
    pub retirements: Vec<Retirement>,
    pub retirement_weight: Dyadic,
}

/// Which entries fix `t_0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HitSet {
    /// Entries of `J` only.
    Literal,
    /// Entries of `J` and retirements.
    #[default]
    WithRetirements,
}

impl std::str::FromStr for HitSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(HitSet::Literal),
            "with_retirements" => Ok(HitSet::WithRetirements),
            other => Err(format!("unknown hit set {other:?}")),
        }
    }
}

/// The use bound `g_s(n)` scanned against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UseBound {
    /// `K_s(X_s↾n)`.
    #[default]
    Literal,
    /// `min_{i ≥ n} K_s(X_s↾i)`; non-decreasing in `n`.
    Envelope,
}

impl std::str::FromStr for UseBound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(UseBound::Literal),
            "envelope" => Ok(UseBound::Envelope),
            other => Err(format!("unknown use bound {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaOptions {
    pub hits: HitSet,
    pub bound: UseBound,
}

/// Shared stage axis of a machine and an approximation.
pub fn joint_horizon(m: &MachineTable, x: &Approximation) -> usize {
    m.horizon.max(x.horizon())
}

fn max_output_len(m: &MachineTable) -> usize {
    m.entries.iter().map(|e| e.output.len()).max().unwrap_or(0)
}

pub fn build_solovay_test(m: &MachineTable, x: &Approximation, horizon: usize) -> SolovayTest {
    let mut items = Vec::new();
    let mut retirements = Vec::new();
    let reach = max_output_len(m);
    for s in 0..horizon {
        let stage = s + 1;
        let omega = m.omega_clamped(stage);
        for n in 0..=s.max(reach) {
            let (old, new) = (x.prefix(s, n), x.prefix(stage, n));
            let k_new = m.k_clamped(&new, stage);
            if old == new {
                if n <= s {
                    if let Some(k) = k_new.filter(|&k| m.k_clamped(&old, s).is_none_or(|k_old| k < k_old)) {
                        items.push(SolovayItem { stage, entry: omega.binary_prefix(k), clause: Clause::A, n });
                    }
                }
                continue;
            }
            if let (true, Some(k)) = (n <= s, k_new) {
                items.push(SolovayItem { stage, entry: omega.binary_prefix(k), clause: Clause::B, n });
            }
            if let Some(k) = m.k_clamped(&old, s) {
                retirements.push(Retirement { stage, entry: omega.binary_prefix(k), n });
            }
        }
    }
    let weight = Dyadic::sum(&items.iter().map(|i| Dyadic::pow2_neg(i.entry.len())).collect::<Vec<_>>());
    let retirement_weight =
        Dyadic::sum(&retirements.iter().map(|r| Dyadic::pow2_neg(r.entry.len())).collect::<Vec<_>>());
    SolovayTest { items, weight, retirements, retirement_weight }
}

fn is_final_prefix(m: &MachineTable, entry: &BitString) -> bool {
    m.final_omega().binary_prefix(entry.len()) == *entry
}

/// Last stage at which `J` received a prefix of the final `Ω`; 0 if none.
pub fn last_hit_stage(j: &SolovayTest, m: &MachineTable) -> usize {
    j.items.iter().filter(|i| is_final_prefix(m, &i.entry)).map(|i| i.stage).max().unwrap_or(0)
}

pub fn hit_stage(j: &SolovayTest, m: &MachineTable, hits: HitSet) -> usize {
    let literal = last_hit_stage(j, m);
    match hits {
        HitSet::Literal => literal,
        HitSet::WithRetirements => j
            .retirements
            .iter()
            .filter(|r| is_final_prefix(m, &r.entry))
            .map(|r| r.stage)
            .fold(literal, usize::max),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum OmegaError {
    #[error("no t up to {scanned} qualifies within the horizon")]
    NotSettledWithinHorizon { scanned: usize },
    #[error("the final prefix {prefix} has no description")]
    NoDescription { prefix: BitString },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub t: usize,
    pub m_t: usize,
    pub g: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaAnswer {
    pub prefix: BitString,
    pub bits_used: usize,
    pub t0: usize,
    /// `K(X↾n)` at the final stage.
    pub g_literal: Option<usize>,
    /// `min_{i ≥ n} K(X↾i)` at the final stage, over the lengths described.
    pub g_envelope: Option<usize>,
    pub audit: Vec<AuditRow>,
}

fn envelope(m: &MachineTable, x: &Approximation, n: usize, s: usize) -> Option<usize> {
    (n..=max_output_len(m).max(n)).filter_map(|i| m.k_clamped(&x.prefix(s, i), s)).min()
}

pub fn compute_from_omega(m: &MachineTable, x: &Approximation, n: usize) -> Result<OmegaAnswer, OmegaError> {
    compute_with(m, x, n, OmegaOptions::default())
}

pub fn compute_with(m: &MachineTable, x: &Approximation, n: usize, opts: OmegaOptions) -> Result<OmegaAnswer, OmegaError> {
    let horizon = joint_horizon(m, x);
    let j = build_solovay_test(m, x, horizon);
    compute_against(m, x, n, &j, opts)
}

/// As [`compute_with`] with `J` already built on the joint horizon.
pub fn compute_against(
    m: &MachineTable,
    x: &Approximation,
    n: usize,
    j: &SolovayTest,
    opts: OmegaOptions,
) -> Result<OmegaAnswer, OmegaError> {
    let horizon = joint_horizon(m, x);
    let t0 = hit_stage(j, m, opts.hits);
    let target = x.prefix(horizon, n);
    let g_literal = m.k_clamped(&target, horizon);
    let g_envelope = envelope(m, x, n, horizon);
    if n == 0 {
        return Ok(OmegaAnswer { prefix: BitString::empty(), bits_used: 0, t0, g_literal, g_envelope, audit: vec![] });
    }
    let g_final = match opts.bound {
        UseBound::Literal => g_literal,
        UseBound::Envelope => g_envelope,
    };
    if g_final.is_none() {
        return Err(OmegaError::NoDescription { prefix: target });
    }
    let longest_program = m.entries.iter().map(|e| e.program.len()).max().unwrap_or(0);
    let scanned = (m.final_omega().exponent() as usize).max(longest_program) + 1;
    let mut audit = Vec::new();
    for t in 0..=scanned {
        let m_t = settling_time(m, t);
        let g = match opts.bound {
            UseBound::Literal => m.k_clamped(&x.prefix(m_t, n), m_t),
            UseBound::Envelope => envelope(m, x, n, m_t),
        };
        audit.push(AuditRow { t, m_t, g });
        if g.is_some_and(|g| t >= g) && m_t >= t0 {
            return Ok(OmegaAnswer { prefix: x.prefix(m_t, n), bits_used: t, t0, g_literal, g_envelope, audit });
        }
    }
    Err(OmegaError::NotSettledWithinHorizon { scanned })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::machine::MachineEntry;

    fn approx(values: &[(u64, u32)]) -> Approximation {
        Approximation::new(values.iter().map(|&(a, e)| Dyadic::from_parts(a, e)).collect())
    }

    #[test]
    fn no_programs_no_entries() {
        let x = approx(&[(0, 0), (1, 1), (3, 2)]);
        let j = build_solovay_test(&MachineTable::empty(2), &x, 2);
        assert!(j.items.is_empty());
        assert_eq!(j.weight, Dyadic::zero());
        assert_eq!(last_hit_stage(&j, &MachineTable::empty(2)), 0);
    }

    // X↾2 goes 00 → 10 at stage 4; "10" has a 3-bit program from stage 0.
    fn five_stage() -> (MachineTable, Approximation) {
        let m = MachineTable::new(vec![MachineEntry::new(bs("000"), bs("10"), 0)], 5);
        let x = approx(&[(0, 0), (0, 0), (0, 0), (0, 0), (1, 1), (1, 1)]);
        (m, x)
    }

    #[test]
    fn clause_b_on_a_prefix_change() {
        let (m, x) = five_stage();
        let j = build_solovay_test(&m, &x, 5);
        let b: Vec<_> = j.items.iter().filter(|i| i.clause == Clause::B).collect();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].stage, b[0].n, b[0].entry.len()), (4, 2, 3));
        assert_eq!(b[0].entry, bs("001"));
        // Nothing was described before the change, so nothing retires.
        assert!(j.retirements.is_empty());
        assert!(j.weight <= m.weight());
    }

    #[test]
    fn last_hit_by_direct_scan() {
        let m = MachineTable::new(vec![MachineEntry::new(bs("1"), bs(""), 0)], 9);
        let item = |stage, entry: &str| SolovayItem { stage, entry: bs(entry), clause: Clause::A, n: 0 };
        let mut j = SolovayTest {
            items: vec![item(3, "0"), item(7, "1")],
            weight: Dyadic::one(),
            retirements: vec![],
            retirement_weight: Dyadic::zero(),
        };
        assert_eq!(last_hit_stage(&j, &m), 7);
        j.items.pop();
        assert_eq!(last_hit_stage(&j, &m), 0);
    }

    #[test]
    fn zero_length_prefix() {
        let (m, x) = five_stage();
        let a = compute_from_omega(&m, &x, 0).unwrap();
        assert_eq!((a.prefix, a.bits_used), (bs(""), 0));
    }

    #[test]
    fn stable_prefix_with_short_description() {
        let x = approx(&[(1, 2), (1, 2), (1, 2), (1, 2)]);
        let m = MachineTable::new(vec![MachineEntry::new(bs("01"), bs("01"), 1)], 3);
        let a = compute_from_omega(&m, &x, 2).unwrap();
        assert_eq!(a.prefix, x.final_prefix(2));
        assert!(a.bits_used <= 2);
        assert_eq!(a.g_literal, Some(2));
    }

    // Ω jumps once at stage 3, when X↾2 is corrected from 00 to 01 and its
    // 1-bit description halts.
    fn six_stage() -> (MachineTable, Approximation) {
        let m = MachineTable::new(
            vec![MachineEntry::new(bs("00"), bs("00"), 0), MachineEntry::new(bs("1"), bs("01"), 3)],
            6,
        );
        let x = approx(&[(0, 0), (0, 0), (0, 0), (1, 2), (1, 2), (1, 2), (1, 2)]);
        (m, x)
    }

    #[test]
    fn corrected_prefix_with_fewer_bits() {
        let (m, x) = six_stage();
        let j = build_solovay_test(&m, &x, 6);
        assert_eq!(j.retirements.len(), 1);
        for hits in [HitSet::Literal, HitSet::WithRetirements] {
            let a = compute_with(&m, &x, 2, OmegaOptions { hits, ..Default::default() }).unwrap();
            assert_eq!(a.prefix, bs("01"), "{hits:?}");
            assert!(a.bits_used < 2);
        }
    }

    #[test]
    fn literal_hits_can_accept_a_stale_prefix() {
        // Generated fixture: X↾6 is replaced after the accepting stage by a
        // prefix whose description is longer than the bits read, so J
        // records nothing that matches the settled Ω.
        let fx = crate::gen::gen_omega_fixture(4);
        let literal = OmegaOptions { hits: HitSet::Literal, ..Default::default() };
        let stale = compute_with(&fx.machine, &fx.x, 6, literal).unwrap();
        assert_ne!(stale.prefix, fx.x.final_prefix(6));
        let a = compute_from_omega(&fx.machine, &fx.x, 6).unwrap();
        assert_eq!(a.prefix, fx.x.final_prefix(6));
    }

    #[test]
    fn envelope_bound_is_monotone_where_literal_is_not() {
        let fx = crate::gen::gen_omega_fixture(3);
        let used = |n, bound| {
            compute_with(&fx.machine, &fx.x, n, OmegaOptions { bound, ..Default::default() }).unwrap().bits_used
        };
        assert!(used(1, UseBound::Literal) > used(2, UseBound::Literal));
        assert!(used(1, UseBound::Envelope) <= used(2, UseBound::Envelope));
    }

    #[test]
    fn missing_description() {
        let m = MachineTable::new(vec![MachineEntry::new(bs("0"), bs("1"), 0)], 2);
        let x = approx(&[(0, 0), (0, 0), (0, 0)]);
        assert_eq!(compute_from_omega(&m, &x, 2), Err(OmegaError::NoDescription { prefix: bs("00") }));
    }
}
