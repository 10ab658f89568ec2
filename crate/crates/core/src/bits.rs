//! Finite binary words.
//!
//! `BitString` is the common currency of the crate: prefixes of reals,
//! programs, codewords and oracle segments are all bit strings. The total
//! order is length first, then lexicographic, so "least" always means the
//! shortest string and, among equal lengths, the leftmost one.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid bit string character {found:?} at position {position}")]
pub struct ParseBitsError {
    pub position: usize,
    pub found: char,
}

impl BitString {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![true; len] }
    }

    /// The `len`-bit big-endian binary representation of `value`.
    ///
    /// Only the low `len` bits of `value` are used.
    pub fn from_index(value: u64, len: usize) -> Self {
        let bits = (0..len)
            .map(|i| {
                let shift = len - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        Self { bits }
    }

    /// Inverse of [`BitString::from_index`] for strings of at most 64 bits.
    pub fn to_index(&self) -> u64 {
        assert!(self.len() <= 64, "to_index on a string longer than 64 bits");
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn child(&self, bit: bool) -> Self {
        let mut out = self.clone();
        out.push(bit);
        out
    }

    pub fn concat(&self, other: &BitString) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    /// The first `n` bits, or the whole string when it is shorter.
    pub fn prefix(&self, n: usize) -> Self {
        Self { bits: self.bits[..n.min(self.len())].to_vec() }
    }

    pub fn suffix_from(&self, start: usize) -> Self {
        Self { bits: self.bits[start.min(self.len())..].to_vec() }
    }

    /// True when `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len() <= other.len() && other.bits[..self.len()] == self.bits[..]
    }

    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    /// One of the two strings is a prefix of the other.
    pub fn comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Pads with zeros on the right up to length `len`.
    pub fn padded(&self, len: usize) -> Self {
        let mut out = self.clone();
        while out.len() < len {
            out.push(false);
        }
        out
    }

    /// All extensions of `self` of total length `len`, in lexicographic order.
    pub fn extensions(&self, len: usize) -> impl Iterator<Item = BitString> + '_ {
        let extra = len.saturating_sub(self.len());
        let count: u64 = if len < self.len() { 0 } else { 1u64 << extra };
        (0..count).map(move |i| self.concat(&BitString::from_index(i, extra)))
    }

    /// Every string of length exactly `len`, lexicographically.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        (0..(1u64 << len)).map(move |i| BitString::from_index(i, len))
    }

    /// Every string of length at most `len`, in canonical order.
    pub fn all_up_to(len: usize) -> impl Iterator<Item = BitString> {
        (0..=len).flat_map(BitString::all_of_length)
    }

    /// Lexicographic comparison ignoring length priority (position on the
    /// unit interval for prefix-incomparable strings).
    pub fn cmp_lex(&self, other: &BitString) -> Ordering {
        self.bits.cmp(&other.bits)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(ParseBitsError { position, found }),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { bits })
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self { bits: iter.into_iter().collect() }
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and fixtures: `bs("0110")`.
///
/// Panics on characters other than `0`/`1`.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}
