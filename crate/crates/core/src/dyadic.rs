//! Exact non-negative dyadic rationals `num / 2^exp`.
//!
//! Every measure, weight and halting-probability approximation in the crate
//! is a finite sum of powers of two, so this is the only number type used
//! for them. Values are always kept in canonical form (odd numerator, or
//! zero with exponent zero), which makes derived equality exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self { num: BigUint::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Self { num: BigUint::one(), exp: 0 }
    }

    pub fn from_int(n: u64) -> Self {
        Self::new(BigUint::from(n), 0)
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: usize) -> Self {
        Self { num: BigUint::one(), exp: k as u32 }
    }

    /// `num / 2^exp`, canonicalised.
    pub fn new(num: BigUint, exp: u32) -> Self {
        let mut d = Self { num, exp };
        d.normalize();
        d
    }

    pub fn from_parts(num: u64, exp: u32) -> Self {
        Self::new(BigUint::from(num), exp)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(u64::from(self.exp)) as u32;
        if tz > 0 {
            self.num >>= tz as usize;
            self.exp -= tz;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn aligned(&self, exp: u32) -> BigUint {
        &self.num << (exp - self.exp) as usize
    }

    /// Exact subtraction, `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let exp = self.exp.max(other.exp);
        let (a, b) = (self.aligned(exp), other.aligned(exp));
        (a >= b).then(|| Dyadic::new(a - b, exp))
    }

    /// Multiplication by `2^{-k}`.
    pub fn shr(&self, k: usize) -> Dyadic {
        Dyadic::new(self.num.clone(), self.exp + k as u32)
    }

    /// Multiplication by `2^k`.
    pub fn shl(&self, k: usize) -> Dyadic {
        let k = k as u32;
        if k <= self.exp {
            Dyadic::new(self.num.clone(), self.exp - k)
        } else {
            Dyadic::new(&self.num << (k - self.exp) as usize, 0)
        }
    }

    pub fn half(&self) -> Dyadic {
        self.shr(1)
    }

    pub fn mul_int(&self, k: u64) -> Dyadic {
        Dyadic::new(&self.num * BigUint::from(k), self.exp)
    }

    /// `floor(self * 2^t)` as a big integer.
    pub fn floor_scaled(&self, t: usize) -> BigUint {
        let t = t as u32;
        if t >= self.exp {
            &self.num << (t - self.exp) as usize
        } else {
            &self.num >> (self.exp - t) as usize
        }
    }

    /// The first `t` bits of the terminating binary expansion of the
    /// fractional value. Values `>= 1` saturate to all ones (the expansion
    /// `0.111…` of 1).
    pub fn binary_prefix(&self, t: usize) -> BitString {
        if *self >= Dyadic::one() {
            return BitString::ones(t);
        }
        let scaled = self.floor_scaled(t);
        (0..t).map(|i| scaled.bit((t - 1 - i) as u64)).collect()
    }

    /// Best-effort float view, only for human-facing summaries.
    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::INFINITY);
        n / 2f64.powi(self.exp as i32)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        let mut acc = Dyadic::zero();
        for d in iter {
            acc += d;
        }
        acc
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        self.aligned(exp).cmp(&other.aligned(exp))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        Dyadic::new(self.aligned(exp) + rhs.aligned(exp), exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// JSON form: {"num": <integer, or decimal string when above u64>, "exp": <u32>}.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Dyadic", 2)?;
        match self.num.to_u64() {
            Some(n) => st.serialize_field("num", &n)?,
            None => st.serialize_field("num", &self.num.to_str_radix(10))?,
        }
        st.serialize_field("exp", &self.exp)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumRepr {
    Int(u64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DyadicRepr {
    num: NumRepr,
    exp: u32,
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DyadicRepr::deserialize(deserializer)?;
        let num = match repr.num {
            NumRepr::Int(n) => BigUint::from(n),
            NumRepr::Text(s) => BigUint::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| de::Error::custom(format!("invalid numerator {s:?}")))?,
        };
        Ok(Dyadic::new(num, repr.exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    #[test]
    fn canonical_form() {
        let d = Dyadic::from_parts(4, 3);
        assert_eq!(d, Dyadic::from_parts(1, 1));
        assert_eq!(d.exponent(), 1);
        assert_eq!(Dyadic::from_parts(0, 9).exponent(), 0);
    }

    #[test]
    fn arithmetic_is_exact() {
        let q = Dyadic::pow2_neg(2);
        let h = Dyadic::pow2_neg(1);
        assert_eq!(&q + &h, Dyadic::from_parts(3, 2));
        assert_eq!(h.checked_sub(&q), Some(q.clone()));
        assert_eq!(q.checked_sub(&h), None);
        assert_eq!(Dyadic::from_parts(3, 2).mul_int(4), Dyadic::from_int(3));
        assert!(Dyadic::pow2_neg(200) > Dyadic::zero());
        assert_eq!(Dyadic::pow2_neg(200).shl(200), Dyadic::one());
    }

    #[test]
    fn binary_prefixes() {
        let v = Dyadic::from_parts(3, 2);
        assert_eq!(v.binary_prefix(0), bs(""));
        assert_eq!(v.binary_prefix(1), bs("1"));
        assert_eq!(v.binary_prefix(4), bs("1100"));
        assert_eq!(Dyadic::one().binary_prefix(3), bs("111"));
    }

    #[test]
    fn json_shape() {
        let v = Dyadic::from_parts(3, 2);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"num":3,"exp":2}"#);
        let back: Dyadic = serde_json::from_str(r#"{"num":"6","exp":3}"#).unwrap();
        assert_eq!(back, v);
    }
}
