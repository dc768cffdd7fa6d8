//! Arbitrary-precision non-negative integers with an inline fast path.
//!
//! Values that fit in a `u64` are stored inline; anything larger spills to a
//! [`BigUint`]. The representation is normalized (a `Big` value is always
//! greater than `u64::MAX`), so derived equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(u64),
    Big(BigUint),
}

/// A non-negative integer of unbounded size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Natural(Repr);

impl Natural {
    pub const ZERO: Natural = Natural(Repr::Small(0));
    pub const ONE: Natural = Natural(Repr::Small(1));

    pub fn from_big(value: BigUint) -> Self {
        match value.to_u64() {
            Some(small) => Natural(Repr::Small(small)),
            None => Natural(Repr::Big(value)),
        }
    }

    pub fn from_u128(value: u128) -> Self {
        match u64::try_from(value) {
            Ok(small) => Natural(Repr::Small(small)),
            Err(_) => Natural(Repr::Big(BigUint::from(value))),
        }
    }

    /// `2^exp`.
    pub fn pow2(exp: u32) -> Self {
        if exp < 64 {
            Natural(Repr::Small(1u64 << exp))
        } else {
            Natural(Repr::Big(BigUint::one() << exp))
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    pub fn is_odd(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v & 1 == 1,
            Repr::Big(b) => b.bit(0),
        }
    }

    /// Number of significant bits (0 for zero).
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - u64::from(v.leading_zeros()),
            Repr::Big(b) => b.bits(),
        }
    }

    /// One application of the shortcut Collatz map: `n/2` for even `n`,
    /// `(3n+1)/2` for odd `n`.
    pub fn collatz_step(&self) -> Natural {
        match &self.0 {
            Repr::Small(v) => {
                let v = *v;
                if v & 1 == 0 {
                    Natural(Repr::Small(v >> 1))
                } else {
                    // (3v+1)/2 = v + (v+1)/2, computed without overflow in u128.
                    Natural::from_u128(u128::from(v) + (u128::from(v) + 1) / 2)
                }
            }
            Repr::Big(b) => {
                if b.bit(0) {
                    Natural::from_big((b * 3u32 + 1u32) >> 1)
                } else {
                    Natural::from_big(b >> 1)
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Natural) -> Natural {
        match (&self.0, &other.0) {
            (Repr::Small(x), Repr::Small(y)) => Natural::from_u128(u128::from(*x) + u128::from(*y)),
            _ => Natural::from_big(self.to_biguint() + other.to_biguint()),
        }
    }

    pub fn mul_small(&self, factor: u64) -> Natural {
        match &self.0 {
            Repr::Small(x) => match x.checked_mul(factor) {
                Some(v) => Natural(Repr::Small(v)),
                None => Natural::from_u128(u128::from(*x) * u128::from(factor)),
            },
            Repr::Big(b) => Natural::from_big(b * factor),
        }
    }

    pub fn add_small(&self, term: u64) -> Natural {
        self.checked_add(&Natural::from(term))
    }
}

impl Default for Natural {
    fn default() -> Self {
        Natural::ZERO
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural(Repr::Small(v))
    }
}

impl From<u32> for Natural {
    fn from(v: u32) -> Self {
        Natural(Repr::Small(u64::from(v)))
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural::from_big(v)
    }
}

impl From<&Natural> for BigUint {
    fn from(v: &Natural) -> Self {
        v.to_biguint()
    }
}

impl Ord for Natural {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            (Repr::Small(_), Repr::Big(_)) => Ordering::Less,
            (Repr::Big(_), Repr::Small(_)) => Ordering::Greater,
            (Repr::Big(a), Repr::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Natural {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid natural number literal {0:?}")]
pub struct ParseNaturalError(pub String);

impl FromStr for Natural {
    type Err = ParseNaturalError;

    /// Accepts plain decimal digits only (no sign, no separators).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseNaturalError(s.to_string()));
        }
        if let Ok(v) = s.parse::<u64>() {
            return Ok(Natural::from(v));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Natural::from_big)
            .ok_or_else(|| ParseNaturalError(s.to_string()))
    }
}

impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Small(v) => serializer.serialize_u64(*v),
            Repr::Big(b) => serializer.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Int(u64),
            Text(String),
        }
        match Wire::deserialize(deserializer)? {
            Wire::Int(v) => Ok(Natural::from(v)),
            Wire::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Zero for Natural {
    fn zero() -> Self {
        Natural::ZERO
    }

    fn is_zero(&self) -> bool {
        Natural::is_zero(self)
    }
}

impl std::ops::Add for Natural {
    type Output = Natural;

    fn add(self, rhs: Natural) -> Natural {
        self.checked_add(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representation_is_normalized() {
        let big = Natural::from_big(BigUint::from(17u32));
        assert_eq!(big, Natural::from(17u64));
        let huge = Natural::pow2(70);
        assert_eq!(huge.bits(), 71);
        assert!(huge > Natural::from(u64::MAX));
    }

    #[test]
    fn step_crosses_u64_boundary() {
        let n = Natural::from(u64::MAX); // odd
        let expected = (BigUint::from(u64::MAX) * 3u32 + 1u32) >> 1;
        assert_eq!(n.collatz_step().to_biguint(), expected);
        let back = Natural::from_big(BigUint::from(u64::MAX) * 2u32).collatz_step();
        assert_eq!(back, Natural::from(u64::MAX));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("12a".parse::<Natural>().is_err());
        assert!("".parse::<Natural>().is_err());
        assert!("-3".parse::<Natural>().is_err());
        let big: Natural = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(big.to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn serde_round_trip() {
        let values = [Natural::from(5u64), Natural::pow2(100)];
        let text = serde_json::to_string(&values).unwrap();
        let back: Vec<Natural> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, values);
    }
}
