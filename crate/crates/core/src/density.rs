//! Finite-set realizations of the trajectory-image operator `H_f`, scans of
//! the drop sets `M_f`, density profiles, and exact finite checks of the
//! set-inclusion and cardinality facts the density arguments rest on.
//!
//! Everything here is a finite-scale estimate. Upper and lower densities are
//! limits and cannot be computed from truncations; profiles report the
//! extremes over late checkpoints instead.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{BoundError, BoundFunction};
use crate::census::ratio_serde;
use crate::natural::Natural;
use crate::rational::decimal_string;
use crate::stopping::{first_drop_outcome, DropOutcome};
use crate::trajectory::step_u128;

/// Largest value accepted as the upper end of an `M_f` scan.
pub const MAX_SCAN_Y: u64 = 1_000_000_000;

const SCAN_CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("checkpoints must be strictly increasing, positive, and at least two")]
    BadCheckpoints,
    #[error("truncation point must be at least 1")]
    ZeroTruncation,
    #[error("scan range {lo}..{hi} must satisfy 1 <= lo <= hi <= {max}", max = MAX_SCAN_Y)]
    BadScanRange { lo: u64, hi: u64 },
    #[error("set elements must be at least 1")]
    ZeroElement,
    #[error("element {element} lies outside [1, {n}]")]
    OutsideTruncation { element: Natural, n: Natural },
    #[error("comparison bound does not dominate: g({y}) > f({y})")]
    NotDominated { y: Natural },
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// A sorted, deduplicated finite set of naturals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Natural>")]
pub struct FiniteSet {
    elements: Vec<Natural>,
}

impl FiniteSet {
    pub fn new() -> Self {
        FiniteSet::default()
    }

    /// `[lo, hi]` (empty if `lo > hi`).
    pub fn interval(lo: u64, hi: u64) -> Self {
        FiniteSet {
            elements: (lo..=hi).map(Natural::from).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, value: &Natural) -> bool {
        self.elements.binary_search(value).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Natural> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Natural] {
        &self.elements
    }

    pub fn min(&self) -> Option<&Natural> {
        self.elements.first()
    }

    pub fn max(&self) -> Option<&Natural> {
        self.elements.last()
    }

    /// `|A ∩ [1, n]|`.
    pub fn count_in(&self, n: &Natural) -> usize {
        let upper = self.elements.partition_point(|x| x <= n);
        let zero = usize::from(self.elements.first().is_some_and(Natural::is_zero));
        upper.saturating_sub(zero)
    }

    /// The first element of `self` missing from `other`, if any.
    pub fn first_missing_from(&self, other: &FiniteSet) -> Option<&Natural> {
        let mut rest = other.elements.iter().peekable();
        for x in &self.elements {
            while rest.next_if(|y| *y < x).is_some() {}
            match rest.peek() {
                Some(y) if *y == x => {}
                _ => return Some(x),
            }
        }
        None
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.first_missing_from(other).is_none()
    }

    /// Elements satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Natural) -> bool) -> FiniteSet {
        FiniteSet {
            elements: self.elements.iter().filter(|x| keep(x)).cloned().collect(),
        }
    }
}

impl FromIterator<Natural> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Natural>>(iter: I) -> Self {
        let mut elements: Vec<Natural> = iter.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        FiniteSet { elements }
    }
}

impl From<Vec<Natural>> for FiniteSet {
    fn from(values: Vec<Natural>) -> Self {
        values.into_iter().collect()
    }
}

impl FromIterator<u64> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        iter.into_iter().map(Natural::from).collect()
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Natural;
    type IntoIter = std::slice::Iter<'a, Natural>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Seeded Bernoulli(`p`) subset of `[lo, hi]`.
pub fn bernoulli_subset(lo: u64, hi: u64, p: Ratio<u64>, seed: u64) -> FiniteSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (num, den) = (*p.numer(), *p.denom());
    (lo..=hi).filter(|_| rng.gen_range(0..den) < num).collect()
}

/// `|A ∩ [1, N]| / N`.
pub fn finite_density(set: &FiniteSet, n: &Natural) -> Result<Ratio<BigUint>, DensityError> {
    if n.is_zero() {
        return Err(DensityError::ZeroTruncation);
    }
    Ok(Ratio::new(BigUint::from(set.count_in(n)), n.to_biguint()))
}

/// Ratios at increasing truncation points, with tail extremes as finite-scale
/// proxies for upper and lower density.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub checkpoints: Vec<u64>,
    pub counts: Vec<u64>,
    /// Number of leading checkpoints excluded from the tail (the first third).
    pub burn_in: usize,
    #[serde(with = "ratio_vec")]
    pub ratios: Vec<Ratio<u64>>,
    #[serde(with = "ratio_serde")]
    pub tail_sup: Ratio<u64>,
    #[serde(with = "ratio_serde")]
    pub tail_inf: Ratio<u64>,
}

impl DensityProfile {
    pub fn decimal(r: &Ratio<u64>) -> String {
        decimal_string(u128::from(*r.numer()), u128::from(*r.denom()), 9)
    }
}

pub fn density_profile(set: &FiniteSet, checkpoints: &[u64]) -> Result<DensityProfile, DensityError> {
    if checkpoints.len() < 2
        || checkpoints[0] == 0
        || checkpoints.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(DensityError::BadCheckpoints);
    }
    let counts: Vec<u64> = checkpoints
        .iter()
        .map(|&n| set.count_in(&Natural::from(n)) as u64)
        .collect();
    let ratios: Vec<Ratio<u64>> = counts
        .iter()
        .zip(checkpoints)
        .map(|(&c, &n)| Ratio::new(c, n))
        .collect();
    let burn_in = checkpoints.len() / 3;
    let tail = &ratios[burn_in..];
    let tail_sup = *tail.iter().max().expect("non-empty tail");
    let tail_inf = *tail.iter().min().expect("non-empty tail");
    Ok(DensityProfile {
        checkpoints: checkpoints.to_vec(),
        counts,
        burn_in,
        ratios,
        tail_sup,
        tail_inf,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HImageResult {
    pub image: FiniteSet,
    /// Sources whose walk hit the cap before reaching 1.
    pub saturated_sources: Vec<Natural>,
}

/// Iterates of one source that fall below its bound; `bool` is true on
/// saturation.
fn source_image(n: &Natural, f: &BoundFunction, cap: u64) -> (Vec<Natural>, bool) {
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        if let Some(cutoff) = f.cutoff_u64(small) {
            let mut value = u128::from(small);
            let mut k = 0u64;
            let finished = loop {
                if value < cutoff {
                    out.push(Natural::from_u128(value));
                }
                if value == 1 {
                    break Some(false);
                }
                if k == cap {
                    break Some(true);
                }
                match step_u128(value) {
                    Some(next) => value = next,
                    None => break None,
                }
                k += 1;
            };
            if let Some(saturated) = finished {
                if !saturated && 2 < cutoff {
                    out.push(Natural::from(2u64));
                }
                return (out, saturated);
            }
            out.clear();
        }
    }
    let cutoff = f.cutoff(n);
    let mut value = n.clone();
    let mut k = 0u64;
    loop {
        if value < cutoff {
            out.push(value.clone());
        }
        if value.is_one() {
            if Natural::from(2u64) < cutoff {
                out.push(Natural::from(2u64));
            }
            return (out, false);
        }
        if k == cap {
            return (out, true);
        }
        value = value.collatz_step();
        k += 1;
    }
}

/// `H_f(A) = {T^k(n) : n ∈ A, T^k(n) < f(n)}`, walking each source until it
/// reaches 1 (after which only the cycle values 1 and 2 remain) or the cap.
pub fn h_image(set: &FiniteSet, f: &BoundFunction, cap: u64) -> Result<HImageResult, DensityError> {
    if set.min().is_some_and(Natural::is_zero) {
        return Err(DensityError::ZeroElement);
    }
    let per_source: Vec<(Vec<Natural>, bool)> = set
        .as_slice()
        .par_iter()
        .map(|n| source_image(n, f, cap))
        .collect();
    let mut saturated_sources = Vec::new();
    let mut values = Vec::new();
    for (n, (image, saturated)) in set.iter().zip(per_source) {
        if saturated {
            saturated_sources.push(n.clone());
        }
        values.extend(image);
    }
    Ok(HImageResult {
        image: values.into_iter().collect(),
        saturated_sources,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MScanReport {
    pub lo: u64,
    pub hi: u64,
    pub cap: u64,
    pub min_k: u64,
    pub total: u64,
    /// Starting values with an iterate below the bound.
    pub resolved: u64,
    /// Starting values whose orbit provably never drops.
    pub never: Vec<u64>,
    /// Starting values that hit the cap without dropping.
    pub unresolved: Vec<u64>,
}

impl MScanReport {
    pub fn fraction(&self) -> Ratio<u64> {
        Ratio::new(self.resolved, self.total)
    }

    pub fn fraction_decimal(&self) -> String {
        decimal_string(u128::from(self.resolved), u128::from(self.total), 12)
    }
}

/// Scans `[lo, hi]` for membership in `M_f`.
pub fn m_scan(
    f: &BoundFunction,
    lo: u64,
    hi: u64,
    cap: u64,
    min_k: u64,
) -> Result<MScanReport, DensityError> {
    if lo == 0 || lo > hi || hi > MAX_SCAN_Y {
        return Err(DensityError::BadScanRange { lo, hi });
    }
    let chunks = (hi - lo) / SCAN_CHUNK + 1;
    let partials: Vec<(u64, Vec<u64>, Vec<u64>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = lo + c * SCAN_CHUNK;
            let end = (start + SCAN_CHUNK - 1).min(hi);
            let mut resolved = 0;
            let mut never = Vec::new();
            let mut unresolved = Vec::new();
            for y in start..=end {
                match first_drop_outcome(&Natural::from(y), f, cap, min_k) {
                    DropOutcome::Dropped(_) => resolved += 1,
                    DropOutcome::Never => never.push(y),
                    DropOutcome::Saturated => unresolved.push(y),
                }
            }
            (resolved, never, unresolved)
        })
        .collect();
    let mut report = MScanReport {
        lo,
        hi,
        cap,
        min_k,
        total: hi - lo + 1,
        resolved: 0,
        never: Vec::new(),
        unresolved: Vec::new(),
    };
    for (resolved, never, unresolved) in partials {
        report.resolved += resolved;
        report.never.extend(never);
        report.unresolved.extend(unresolved);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityReport {
    pub m: u32,
    pub source_size: u64,
    pub image_size: u64,
    /// `|T^m(B)| · 2^m >= |B|`.
    pub holds: bool,
}

/// Checks `|T^m(B)| >= |B| / 2^m`.
pub fn image_cardinality_check(set: &FiniteSet, m: u32) -> CardinalityReport {
    let image: FiniteSet = set
        .as_slice()
        .par_iter()
        .map(|n| {
            let mut v = n.clone();
            for _ in 0..m {
                v = v.collatz_step();
            }
            v
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let source_size = set.len() as u64;
    let image_size = image.len() as u64;
    CardinalityReport {
        m,
        source_size,
        image_size,
        holds: BigUint::from(image_size) << m >= BigUint::from(source_size),
    }
}

/// The finite facts behind the statement that `T` preserves positive upper
/// density: halving is injective on evens, `3n+1` is injective on odds, and
/// both images land in predictable intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TpdpReport {
    pub n: u64,
    pub evens: u64,
    pub odds: u64,
    pub even_image_size: u64,
    pub odd_image_size: u64,
    pub even_image_max: Option<u64>,
    pub odd_image_min: Option<u64>,
    pub odd_image_max: Option<u64>,
    /// `T` is injective on `E` and `T(E) ⊆ [1, ⌊N/2⌋]`.
    pub even_ok: bool,
    /// `T` is injective on `O` and `T(O) ⊆ [2, ⌊(3N+1)/2⌋]`.
    pub odd_ok: bool,
    #[serde(with = "ratio_serde")]
    pub density_a: Ratio<u64>,
    /// `|T(A) ∩ [1, N]| / N`.
    #[serde(with = "ratio_serde")]
    pub density_image: Ratio<u64>,
    /// `|T(E) ∩ [1, ⌈N/2⌉]| / ⌈N/2⌉`, the finite shadow of `2·d(E)`.
    #[serde(with = "ratio_serde")]
    pub density_even_image: Ratio<u64>,
    /// `|T(O) ∩ [1, ⌊(3N+1)/2⌋]| / ⌊(3N+1)/2⌋`, the finite shadow of `(2/3)·d(O)`.
    #[serde(with = "ratio_serde")]
    pub density_odd_image: Ratio<u64>,
}

pub fn t_pdp_example_check(set: &FiniteSet, n: u64) -> Result<TpdpReport, DensityError> {
    if n == 0 {
        return Err(DensityError::ZeroTruncation);
    }
    let n_nat = Natural::from(n);
    if let Some(bad) = set.iter().find(|x| x.is_zero() || **x > n_nat) {
        return Err(DensityError::OutsideTruncation {
            element: bad.clone(),
            n: n_nat,
        });
    }
    let values: Vec<u64> = set.iter().map(|x| x.to_u64().expect("bounded by n")).collect();
    let (evens, odds): (Vec<u64>, Vec<u64>) = values.iter().partition(|&&x| x % 2 == 0);
    let even_image: FiniteSet = evens.iter().map(|&e| e / 2).collect();
    let odd_image: FiniteSet = odds.iter().map(|&o| (3 * o + 1) / 2).collect();
    let as_u64 = |x: Option<&Natural>| x.and_then(Natural::to_u64);
    let half_floor = n / 2;
    let half_ceil = n.div_ceil(2);
    let odd_top = (3 * n + 1) / 2;
    let even_ok = even_image.len() == evens.len()
        && as_u64(even_image.max()).is_none_or(|m| m <= half_floor)
        && even_image.count_in(&Natural::from(half_ceil)) == evens.len();
    let odd_ok = odd_image.len() == odds.len()
        && as_u64(odd_image.min()).is_none_or(|m| m >= 2)
        && as_u64(odd_image.max()).is_none_or(|m| m <= odd_top);
    let image: FiniteSet = even_image.iter().chain(odd_image.iter()).cloned().collect();
    Ok(TpdpReport {
        n,
        evens: evens.len() as u64,
        odds: odds.len() as u64,
        even_image_size: even_image.len() as u64,
        odd_image_size: odd_image.len() as u64,
        even_image_max: as_u64(even_image.max()),
        odd_image_min: as_u64(odd_image.min()),
        odd_image_max: as_u64(odd_image.max()),
        even_ok,
        odd_ok,
        density_a: Ratio::new(set.len() as u64, n),
        density_image: Ratio::new(image.count_in(&n_nat) as u64, n),
        density_even_image: Ratio::new(
            even_image.count_in(&Natural::from(half_ceil)) as u64,
            half_ceil,
        ),
        density_odd_image: Ratio::new(odd_image.count_in(&Natural::from(odd_top)) as u64, odd_top),
    })
}

/// One exact finite inclusion `lhs ⊆ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionCheck {
    pub name: String,
    pub lhs_size: u64,
    pub rhs_size: u64,
    /// `None` when saturation makes either side incomplete.
    pub holds: Option<bool>,
    /// An element of the left side missing from the right side.
    pub witness: Option<Natural>,
    pub saturated_sources: Vec<Natural>,
}

impl InclusionCheck {
    fn evaluate(name: &str, lhs: &HImageResult, rhs: &HImageResult, extra: &[Natural]) -> Self {
        let witness = lhs.image.first_missing_from(&rhs.image).cloned();
        let saturated: FiniteSet = lhs
            .saturated_sources
            .iter()
            .chain(&rhs.saturated_sources)
            .chain(extra)
            .cloned()
            .collect();
        let saturated_sources = saturated.as_slice().to_vec();
        InclusionCheck {
            name: name.to_string(),
            lhs_size: lhs.image.len() as u64,
            rhs_size: rhs.image.len() as u64,
            holds: saturated_sources.is_empty().then_some(witness.is_none()),
            witness,
            saturated_sources,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    /// `H_g(A) ⊆ H_f(A)` when `g <= f` on `A`.
    pub comparison: InclusionCheck,
    /// `H_f(H_g(A)) ⊆ H_{f∘g}(A)`.
    pub composition: InclusionCheck,
    /// `(H_f)^k(A) ⊆ H_{f^k}(A)`.
    pub iterated: InclusionCheck,
    pub k: u32,
}

impl InclusionReport {
    pub fn checks(&self) -> [&InclusionCheck; 3] {
        [&self.comparison, &self.composition, &self.iterated]
    }

    /// True when every check produced a verdict and all of them hold.
    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|c| c.holds == Some(true))
    }
}

/// Runs the comparison, composition and `k`-fold inclusion checks on `A`.
///
/// Requires `g(y) <= f(y)` for every `y ∈ A` and `k >= 1`.
pub fn h_inclusion_check(
    set: &FiniteSet,
    f: &BoundFunction,
    g: &BoundFunction,
    k: u32,
    cap: u64,
) -> Result<InclusionReport, DensityError> {
    if k == 0 {
        return Err(DensityError::ZeroIterations);
    }
    if let Some(y) = set.iter().find(|y| !g.le_at(f, y)) {
        return Err(DensityError::NotDominated { y: y.clone() });
    }
    let h_f = h_image(set, f, cap)?;
    let h_g = h_image(set, g, cap)?;
    let comparison = InclusionCheck::evaluate("comparison", &h_g, &h_f, &[]);

    let h_f_of_h_g = h_image(&h_g.image, f, cap)?;
    let h_fg = h_image(set, &f.compose(g)?, cap)?;
    let composition =
        InclusionCheck::evaluate("composition", &h_f_of_h_g, &h_fg, &h_g.saturated_sources);

    let mut iterated_image = h_f.clone();
    let mut upstream = Vec::new();
    for _ in 1..k {
        upstream.extend(iterated_image.saturated_sources.iter().cloned());
        iterated_image = h_image(&iterated_image.image, f, cap)?;
    }
    let h_fk = h_image(set, &f.power(k)?, cap)?;
    let iterated = InclusionCheck::evaluate("iterated", &iterated_image, &h_fk, &upstream);

    Ok(InclusionReport {
        comparison,
        composition,
        iterated,
        k,
    })
}

mod ratio_vec {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{format_ratio, parse_ratio};

    pub fn serialize<S: Serializer>(v: &[Ratio<u64>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_ratio))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Ratio<u64>>, D::Error> {
        let text = Vec::<String>::deserialize(d)?;
        text.iter()
            .map(|t| parse_ratio(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::iterate;

    fn r(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    fn linear(n: u64, d: u64) -> BoundFunction {
        BoundFunction::linear(r(n, d)).unwrap()
    }

    fn set(values: &[u64]) -> FiniteSet {
        values.iter().copied().collect()
    }

    fn rb(n: u64, d: u64) -> Ratio<BigUint> {
        Ratio::new(BigUint::from(n), BigUint::from(d))
    }

    #[test]
    fn finite_density_examples() {
        let evens: FiniteSet = (1..=20u64).filter(|x| x % 2 == 0).collect();
        assert_eq!(finite_density(&evens, &Natural::from(10u64)).unwrap(), rb(5, 10));
        assert_eq!(finite_density(&FiniteSet::new(), &Natural::from(7u64)).unwrap(), rb(0, 1));
        assert_eq!(finite_density(&set(&[1, 2, 3]), &Natural::from(6u64)).unwrap(), rb(1, 2));
        assert_eq!(
            finite_density(&set(&[1]), &Natural::ZERO),
            Err(DensityError::ZeroTruncation)
        );
    }

    #[test]
    fn zero_is_not_counted() {
        let with_zero = set(&[0, 1, 2]);
        assert_eq!(with_zero.count_in(&Natural::from(5u64)), 2);
    }

    #[test]
    fn profile_examples() {
        let cps = [100, 1000, 10_000];
        let threes: FiniteSet = (1..=10_000u64).filter(|x| x % 3 == 0).collect();
        let p = density_profile(&threes, &cps).unwrap();
        for (ratio, &n) in p.ratios.iter().zip(&cps) {
            assert!(*ratio <= r(1, 3) && r(1, 3) - *ratio < r(1, n));
        }
        let empty = density_profile(&FiniteSet::new(), &cps).unwrap();
        assert!(empty.ratios.iter().all(|x| *x == r(0, 1)));
        let full = density_profile(&FiniteSet::interval(1, 10_000), &cps).unwrap();
        assert!(full.ratios.iter().all(|x| *x == r(1, 1)));
        assert_eq!(full.tail_inf, r(1, 1));
    }

    #[test]
    fn profile_tail_excludes_burn_in() {
        let early: FiniteSet = (1..=10u64).collect();
        let p = density_profile(&early, &[10, 20, 40, 80, 160, 320]).unwrap();
        assert_eq!(p.burn_in, 2);
        assert_eq!(p.tail_sup, r(10, 40));
        assert_eq!(p.tail_inf, r(10, 320));
        assert!(p.tail_inf <= p.tail_sup);
    }

    #[test]
    fn profile_rejects_bad_checkpoints() {
        let s = FiniteSet::new();
        assert_eq!(density_profile(&s, &[10]), Err(DensityError::BadCheckpoints));
        assert_eq!(density_profile(&s, &[10, 10]), Err(DensityError::BadCheckpoints));
        assert_eq!(density_profile(&s, &[0, 10]), Err(DensityError::BadCheckpoints));
    }

    #[test]
    fn h_image_examples() {
        let img = h_image(&set(&[5]), &linear(1, 2), 100).unwrap();
        assert_eq!(img.image, set(&[1, 2]));
        // f(3) = 1/3 * 3 = 1: nothing is below 1.
        let img = h_image(&set(&[3]), &linear(1, 3), 100).unwrap();
        assert!(img.image.is_empty());
        let img = h_image(&set(&[4]), &linear(1, 1), 100).unwrap();
        assert_eq!(img.image, set(&[1, 2]));
        assert!(img.saturated_sources.is_empty());
    }

    #[test]
    fn h_image_includes_cycle_value() {
        // From 1 the orbit is 1, 2, 1, ...; with f(1) = 3 both are below.
        let img = h_image(&set(&[1]), &linear(3, 1), 100).unwrap();
        assert_eq!(img.image, set(&[1, 2]));
    }

    #[test]
    fn h_image_reports_saturation() {
        let img = h_image(&set(&[27, 4]), &linear(1, 1), 5).unwrap();
        assert_eq!(img.saturated_sources, vec![Natural::from(27u64)]);
        assert_eq!(h_image(&set(&[0, 3]), &linear(1, 1), 5), Err(DensityError::ZeroElement));
    }

    /// Brute-force oracle: every pair (n, k) up to a generous horizon.
    fn h_image_oracle(a: &FiniteSet, f: &BoundFunction, horizon: u64) -> FiniteSet {
        let mut out = Vec::new();
        for n in a {
            let mut v = n.clone();
            for _ in 0..=horizon {
                if f.compare(n, &v) == crate::bound::BoundOrdering::Less {
                    out.push(v.clone());
                }
                v = v.collatz_step();
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn h_image_matches_oracle() {
        let a = FiniteSet::interval(1, 300);
        for f in [
            linear(1, 2),
            linear(1, 1),
            linear(3, 1),
            BoundFunction::power_law(r(4, 5)).unwrap(),
        ] {
            // Every start below 300 reaches 1 within 200 shortcut steps.
            let got = h_image(&a, &f, 10_000).unwrap();
            assert_eq!(got.image, h_image_oracle(&a, &f, 400), "{f}");
        }
    }

    #[test]
    fn every_image_element_has_a_witness() {
        let a = set(&[7, 27, 97]);
        let f = linear(1, 2);
        let img = h_image(&a, &f, 10_000).unwrap();
        for v in &img.image {
            let witnessed = a.iter().any(|n| {
                (0..500).any(|k| {
                    let t = iterate(n, k);
                    t == *v && f.compare(n, &t) == crate::bound::BoundOrdering::Less
                })
            });
            assert!(witnessed, "{v}");
        }
    }

    #[test]
    fn m_scan_examples() {
        let rep = m_scan(&linear(1, 1), 3, 10_000, 10_000, 0).unwrap();
        assert_eq!(rep.fraction(), r(1, 1));
        assert!(rep.unresolved.is_empty());
        let rep = m_scan(&linear(1, 2), 3, 10_000, 10_000, 0).unwrap();
        assert_eq!(rep.fraction(), r(1, 1));
        let rep = m_scan(&linear(1, 1), 1, 2, 10, 0).unwrap();
        assert_eq!(rep.never, vec![1]);
        assert_eq!(rep.resolved, 1);
        let rep = m_scan(&linear(1, 1), 1, 2, 10, 1).unwrap();
        assert_eq!(rep.never, vec![1]);
        assert_eq!(
            m_scan(&linear(1, 1), 0, 2, 10, 0),
            Err(DensityError::BadScanRange { lo: 0, hi: 2 })
        );
        assert!(m_scan(&linear(1, 1), 5, 4, 10, 0).is_err());
    }

    #[test]
    fn m_scan_reports_saturation() {
        let rep = m_scan(&linear(1, 1), 27, 27, 10, 0).unwrap();
        assert_eq!(rep.unresolved, vec![27]);
        assert_eq!(rep.resolved, 0);
    }

    #[test]
    fn cardinality_examples() {
        let rep = image_cardinality_check(&set(&[3, 10]), 1);
        assert_eq!((rep.source_size, rep.image_size, rep.holds), (2, 1, true));
        let rep = image_cardinality_check(&FiniteSet::new(), 3);
        assert_eq!((rep.source_size, rep.image_size, rep.holds), (0, 0, true));
        for m in 0..=10 {
            let rep = image_cardinality_check(&FiniteSet::interval(1, 1 << m), m);
            assert!(rep.holds, "m={m}");
        }
    }

    #[test]
    fn tpdp_examples() {
        let evens: FiniteSet = (1..=100u64).filter(|x| x % 2 == 0).collect();
        let rep = t_pdp_example_check(&evens, 100).unwrap();
        assert_eq!(rep.even_image_size, 50);
        assert_eq!(rep.even_image_max, Some(50));
        assert!(rep.even_ok && rep.odd_ok);
        assert_eq!(rep.density_even_image, r(1, 1));

        let odds: FiniteSet = (1..=99u64).filter(|x| x % 2 == 1).collect();
        let rep = t_pdp_example_check(&odds, 100).unwrap();
        assert_eq!(rep.odd_image_size, 50);
        assert_eq!(rep.odd_image_min, Some(2));
        assert!(rep.odd_ok);

        let rep = t_pdp_example_check(&FiniteSet::new(), 10).unwrap();
        assert_eq!((rep.evens, rep.odds), (0, 0));
        assert!(rep.even_ok && rep.odd_ok);

        assert!(matches!(
            t_pdp_example_check(&set(&[11]), 10),
            Err(DensityError::OutsideTruncation { .. })
        ));
    }

    #[test]
    fn inclusion_examples() {
        let a = FiniteSet::interval(1, 500);
        let rep = h_inclusion_check(&a, &linear(1, 2), &linear(1, 4), 2, 10_000).unwrap();
        assert_eq!(rep.comparison.holds, Some(true));
        let rep = h_inclusion_check(&a, &linear(1, 2), &linear(1, 2), 2, 10_000).unwrap();
        assert!(rep.all_hold());
        let rep = h_inclusion_check(&FiniteSet::new(), &linear(1, 2), &linear(1, 2), 3, 10).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.comparison.lhs_size, 0);
    }

    #[test]
    fn inclusion_preconditions() {
        let a = FiniteSet::interval(1, 50);
        assert!(matches!(
            h_inclusion_check(&a, &linear(1, 4), &linear(1, 2), 2, 100),
            Err(DensityError::NotDominated { .. })
        ));
        assert_eq!(
            h_inclusion_check(&a, &linear(1, 2), &linear(1, 2), 0, 100),
            Err(DensityError::ZeroIterations)
        );
    }

    #[test]
    fn inclusion_voided_by_saturation() {
        let a = set(&[27]);
        let rep = h_inclusion_check(&a, &linear(1, 1), &linear(1, 2), 2, 5).unwrap();
        assert_eq!(rep.comparison.holds, None);
        assert!(!rep.all_hold());
    }

    #[test]
    fn subset_logic() {
        let a = set(&[2, 4, 6]);
        let b = set(&[1, 2, 3, 4, 5, 6]);
        assert!(a.is_subset(&b));
        assert_eq!(b.first_missing_from(&a), Some(&Natural::from(1u64)));
        assert!(FiniteSet::new().is_subset(&a));
        assert_eq!(set(&[7]).first_missing_from(&b), Some(&Natural::from(7u64)));
    }

    #[test]
    fn bernoulli_is_seeded() {
        let a = bernoulli_subset(1, 10_000, r(1, 2), 42);
        let b = bernoulli_subset(1, 10_000, r(1, 2), 42);
        let c = bernoulli_subset(1, 10_000, r(1, 2), 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((4_500..5_500).contains(&a.len()));
    }
}
