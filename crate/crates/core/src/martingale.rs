//! Finite-depth (super)martingales with exact dyadic capital.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::dyadic::Dyadic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MartingaleKind {
    Martingale,
    Supermartingale,
}

/// Capital on every node of the full binary tree of height `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Martingale {
    depth: usize,
    kind: MartingaleKind,
    // Heap order: node σ lives at 2^|σ| - 1 + index(σ).
    values: Vec<Dyadic>,
}

fn slot(sigma: &BitString) -> usize {
    (1usize << sigma.len()) - 1 + sigma.to_index() as usize
}

impl Martingale {
    /// All-zero capital.
    pub fn zero(depth: usize, kind: MartingaleKind) -> Self {
        assert!(depth < 30, "martingale depth {depth} is beyond desk scale");
        Self { depth, kind, values: vec![Dyadic::zero(); (1usize << (depth + 1)) - 1] }
    }

    pub fn from_fn(depth: usize, kind: MartingaleKind, mut f: impl FnMut(&BitString) -> Dyadic) -> Self {
        let mut m = Self::zero(depth, kind);
        for sigma in BitString::all_up_to(depth) {
            let v = f(&sigma);
            m.values[slot(&sigma)] = v;
        }
        m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> MartingaleKind {
        self.kind
    }

    pub fn value(&self, sigma: &BitString) -> Option<&Dyadic> {
        (sigma.len() <= self.depth).then(|| &self.values[slot(sigma)])
    }

    pub fn set(&mut self, sigma: &BitString, v: Dyadic) {
        assert!(sigma.len() <= self.depth, "node {sigma} below depth {}", self.depth);
        self.values[slot(sigma)] = v;
    }

    pub fn initial_capital(&self) -> &Dyadic {
        &self.values[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FairnessViolation {
    pub node: BitString,
    pub value: Dyadic,
    pub average: Dyadic,
}

/// Nodes where fairness (or super-fairness) fails; empty iff valid.
pub fn validate_martingale(m: &Martingale) -> Vec<FairnessViolation> {
    let mut out = Vec::new();
    if m.depth == 0 {
        return out;
    }
    for sigma in BitString::all_up_to(m.depth - 1) {
        let v = &m.values[slot(&sigma)];
        let average = (&m.values[slot(&sigma.child(false))] + &m.values[slot(&sigma.child(true))]).half();
        let ok = match m.kind {
            MartingaleKind::Martingale => *v == average,
            MartingaleKind::Supermartingale => *v >= average,
        };
        if !ok {
            out.push(FairnessViolation { node: sigma, value: v.clone(), average });
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct MartingaleRepr {
    depth: usize,
    kind: MartingaleKind,
    values: BTreeMap<BitString, Dyadic>,
}

impl Serialize for Martingale {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let values = BitString::all_up_to(self.depth).map(|s| {
            let v = self.values[slot(&s)].clone();
            (s, v)
        });
        MartingaleRepr { depth: self.depth, kind: self.kind, values: values.collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Martingale {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MartingaleRepr::deserialize(deserializer)?;
        if repr.depth >= 30 {
            return Err(serde::de::Error::custom("martingale depth too large"));
        }
        let mut m = Martingale::zero(repr.depth, repr.kind);
        for (sigma, v) in repr.values {
            if sigma.len() > repr.depth {
                return Err(serde::de::Error::custom(format!("node {sigma} deeper than depth")));
            }
            m.set(&sigma, v);
        }
        Ok(m)
    }
}
