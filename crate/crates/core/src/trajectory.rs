//! Exact iteration of the shortcut Collatz map and parity statistics.

use serde::{Deserialize, Serialize};

use crate::natural::Natural;

/// Default iteration cap for trajectory walks.
pub const DEFAULT_CAP: u64 = 100_000;

/// `T(n)`: `n/2` for even `n`, `(3n+1)/2` for odd `n`. `T(0) = 0`.
pub fn collatz_step(n: &Natural) -> Natural {
    n.collatz_step()
}

/// `T^k(n)`.
pub fn iterate(n: &Natural, k: u64) -> Natural {
    let mut value = n.clone();
    for _ in 0..k {
        value = value.collatz_step();
    }
    value
}

/// One step on a machine word, or `None` if the result does not fit.
#[inline]
pub fn step_u128(n: u128) -> Option<u128> {
    if n & 1 == 0 {
        Some(n >> 1)
    } else {
        // (3n+1)/2 = n + (n+1)/2
        n.checked_add((n >> 1) + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    ReachedOne,
    CapHit,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ReachedOne => "REACHED_ONE",
            Termination::CapHit => "CAP_HIT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub start: Natural,
    /// `iterates[0] = start`, `iterates[j+1] = T(iterates[j])`.
    pub iterates: Vec<Natural>,
    pub terminated_by: Termination,
    pub steps: u64,
}

/// Iterates from `n` until the value 1 is appended or `cap` steps are taken.
///
/// Starting at 0 never reaches 1 and always runs into the cap.
pub fn trajectory(n: &Natural, cap: u64) -> TrajectoryRecord {
    let mut iterates = vec![n.clone()];
    let mut current = n.clone();
    let mut steps = 0;
    while !current.is_one() && steps < cap {
        current = current.collatz_step();
        iterates.push(current.clone());
        steps += 1;
    }
    let terminated_by = if current.is_one() {
        Termination::ReachedOne
    } else {
        Termination::CapHit
    };
    TrajectoryRecord {
        start: n.clone(),
        iterates,
        terminated_by,
        steps,
    }
}

/// Which prefix of the parity vector a parity sum covers.
///
/// `Exclusive` sums the first `m` parities `X_0..X_{m-1}`; `Inclusive` sums
/// `X_0..X_m`, i.e. `m + 1` parities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityVariant {
    Exclusive,
    Inclusive,
}

impl ParityVariant {
    /// Number of parity bits the variant sums for parameter `m`.
    pub fn bit_len(self, m: u32) -> u32 {
        match self {
            ParityVariant::Exclusive => m,
            ParityVariant::Inclusive => m + 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ParityVariant::Exclusive => "exclusive",
            ParityVariant::Inclusive => "inclusive",
        }
    }
}

/// Parities of successive iterates: `bits[j] = 1` iff `T^j(y)` is odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityVector {
    bits: Vec<bool>,
}

impl ParityVector {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        ParityVector { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    /// Packs the bits little-endian (`bits[0]` is the lowest bit). `None`
    /// for vectors longer than 64.
    pub fn to_word(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &b)| acc | (u64::from(b) << j)),
        )
    }
}

impl std::fmt::Display for ParityVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn parity_vector(y: &Natural, len: usize) -> ParityVector {
    if let (Some(small), true) = (y.to_u64(), len <= 64) {
        let word = parity_word(small, len as u32);
        return ParityVector::from_bits((0..len).map(|j| word >> j & 1 == 1).collect());
    }
    let mut bits = Vec::with_capacity(len);
    let mut value = y.clone();
    for j in 0..len {
        bits.push(value.is_odd());
        if j + 1 < len {
            value = value.collatz_step();
        }
    }
    ParityVector::from_bits(bits)
}

/// First `len` parity bits of `y`, packed little-endian. `len <= 64`.
///
/// Iterates in `u128`; for `y < 2^64` and at most 64 steps the iterates stay
/// below `2^103`, so no step can overflow.
#[inline]
pub fn parity_word(y: u64, len: u32) -> u64 {
    debug_assert!(len <= 64);
    let mut value = u128::from(y);
    let mut word = 0u64;
    for j in 0..len {
        let odd = value & 1;
        word |= (odd as u64) << j;
        value = if odd == 0 {
            value >> 1
        } else {
            value + (value >> 1) + 1
        };
    }
    word
}

/// Number of odd iterates among the first `len` iterates of `y`.
#[inline]
pub fn odd_count_u64(y: u64, len: u32) -> Option<u32> {
    let mut value = u128::from(y);
    let mut count = 0;
    for _ in 0..len {
        if value & 1 == 1 {
            count += 1;
        }
        value = step_u128(value)?;
    }
    Some(count)
}

/// `S_m(y)` under the given variant.
pub fn parity_sum(y: &Natural, m: u32, variant: ParityVariant) -> u64 {
    let len = variant.bit_len(m);
    if let Some(small) = y.to_u64() {
        if let Some(count) = odd_count_u64(small, len) {
            return u64::from(count);
        }
    }
    let mut value = y.clone();
    let mut count = 0;
    for _ in 0..len {
        if value.is_odd() {
            count += 1;
        }
        value = value.collatz_step();
    }
    count
}
