//! First-drop detection: the least `k` with `T^k(y) < f(y)`.

use serde::{Deserialize, Serialize};

use crate::bound::BoundFunction;
use crate::natural::Natural;
use crate::trajectory::step_u128;

/// Result of searching a trajectory for an iterate below a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "k")]
pub enum DropOutcome {
    /// `T^k(y) < f(y)` and no earlier admissible iterate is below the bound.
    Dropped(u64),
    /// The trajectory reached the 1 -> 2 -> 1 cycle without dropping, so no
    /// later iterate can drop either.
    Never,
    /// The cap was reached before either of the above was established.
    Saturated,
}

impl DropOutcome {
    pub fn step(self) -> Option<u64> {
        match self {
            DropOutcome::Dropped(k) => Some(k),
            _ => None,
        }
    }
}

/// Least `k` in `[0, cap]` with `T^k(y) < f(y)`, or `None`.
pub fn first_drop(y: &Natural, f: &BoundFunction, cap: u64) -> Option<u64> {
    first_drop_outcome(y, f, cap, 0).step()
}

/// Least `k` in `[min_k, cap]` with `T^k(y) < f(y)`, classifying failures.
///
/// `min_k = 1` excludes the trivial drop at `k = 0` that occurs whenever
/// `f(y) > y`.
pub fn first_drop_outcome(y: &Natural, f: &BoundFunction, cap: u64, min_k: u64) -> DropOutcome {
    if let Some(small) = y.to_u64() {
        if let Some(cutoff) = f.cutoff_u64(small) {
            if let Some(outcome) = walk_u128(u128::from(small), cutoff, cap, min_k) {
                return outcome;
            }
        }
    }
    let cutoff = f.cutoff(y);
    walk_natural(y.clone(), &cutoff, cap, min_k)
}

/// Walks in machine words; `None` if an iterate outgrows `u128`.
fn walk_u128(start: u128, cutoff: u128, cap: u64, min_k: u64) -> Option<DropOutcome> {
    let mut value = start;
    let mut k = 0u64;
    loop {
        if k >= min_k {
            if value < cutoff {
                return Some(DropOutcome::Dropped(k));
            }
            // 1 and 2 are the only values left on the orbit, and 2 >= 1 >= cutoff.
            if value == 1 {
                return Some(DropOutcome::Never);
            }
        }
        if value == 0 {
            return Some(DropOutcome::Never);
        }
        if k == cap {
            return Some(DropOutcome::Saturated);
        }
        value = step_u128(value)?;
        k += 1;
    }
}

fn walk_natural(start: Natural, cutoff: &Natural, cap: u64, min_k: u64) -> DropOutcome {
    let mut value = start;
    let mut k = 0u64;
    loop {
        if k >= min_k {
            if value < *cutoff {
                return DropOutcome::Dropped(k);
            }
            if value.is_one() {
                return DropOutcome::Never;
            }
        }
        if value.is_zero() {
            return DropOutcome::Never;
        }
        if k == cap {
            return DropOutcome::Saturated;
        }
        value = value.collatz_step();
        k += 1;
    }
}
