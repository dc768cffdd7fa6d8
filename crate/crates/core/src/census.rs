//! Exact parity censuses `U(m, d)`, the residue/parity-vector bijection,
//! membership in `L_{m,d}`, and the drop audit for sets with few odd steps.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::natural::Natural;
use crate::rational::decimal_string;
use crate::trajectory::{parity_sum, parity_vector, parity_word, ParityVariant, ParityVector};

/// Default guard on `m` for enumeration.
pub const DEFAULT_MAX_M: u32 = 28;
/// Guard on `k` for materialized residue tables.
pub const MAX_TABLE_K: u32 = 20;

const CHUNK_BITS: u32 = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error("m = {m} exceeds the enumeration guard {max}")]
    TooLarge { m: u32, max: u32 },
    #[error("m must be at least 1")]
    ZeroM,
    #[error("table size k = {k} exceeds the guard {max}")]
    TableTooLarge { k: u32, max: u32 },
    #[error("residue table for k = {k} is not a bijection: residues {first} and {second} share a parity vector")]
    NotBijective { k: u32, first: u64, second: u64 },
    #[error("threshold requires M >= 3, got {0}")]
    ThresholdTooSmall(u32),
    #[error("invalid audit sample: {0}")]
    InvalidSample(String),
}

/// How a parity sum is compared against `m·d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    /// `S < m·d`
    #[default]
    Strict,
    /// `S <= m·d`
    Weak,
}

impl Comparator {
    /// Decides `sum ⋈ m·d` exactly.
    #[inline]
    pub fn admits(self, sum: u64, m: u32, d: &Ratio<u64>) -> bool {
        let lhs = u128::from(sum) * u128::from(*d.denom());
        let rhs = u128::from(m) * u128::from(*d.numer());
        match self {
            Comparator::Strict => lhs < rhs,
            Comparator::Weak => lhs <= rhs,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Strict => "lt",
            Comparator::Weak => "le",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusParams {
    pub m: u32,
    #[serde(with = "ratio_serde")]
    pub d: Ratio<u64>,
    pub variant: ParityVariant,
    pub comparator: Comparator,
    pub window_base: Natural,
}

impl CensusParams {
    pub fn new(m: u32, d: Ratio<u64>, variant: ParityVariant, comparator: Comparator) -> Self {
        CensusParams {
            m,
            d,
            variant,
            comparator,
            window_base: Natural::ZERO,
        }
    }

    pub fn with_base(mut self, base: Natural) -> Self {
        self.window_base = base;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub params: CensusParams,
    /// `log2` of the window length.
    pub window_bits: u32,
    pub count: u64,
    pub total: u64,
}

impl CensusResult {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.count, self.total)
    }

    pub fn ratio_decimal(&self) -> String {
        decimal_string(u128::from(self.count), u128::from(self.total), 12)
    }
}

/// `U(m, d)` over the window `[b, b + 2^m)`.
pub fn census(params: &CensusParams) -> Result<CensusResult, CensusError> {
    census_window(params, params.m, DEFAULT_MAX_M)
}

/// Census over `[b, b + 2^window_bits)`; `max_m` guards both `m` and the
/// window size.
pub fn census_window(
    params: &CensusParams,
    window_bits: u32,
    max_m: u32,
) -> Result<CensusResult, CensusError> {
    if params.m == 0 {
        return Err(CensusError::ZeroM);
    }
    for bits in [params.m, window_bits] {
        if bits > max_m {
            return Err(CensusError::TooLarge { m: bits, max: max_m });
        }
    }
    let len = params.variant.bit_len(params.m);
    let total = 1u64 << window_bits;
    let chunk_bits = CHUNK_BITS.min(window_bits);
    let chunks = 1u64 << (window_bits - chunk_bits);
    let chunk_len = 1u64 << chunk_bits;
    let admits = |sum: u64| params.comparator.admits(sum, params.m, &params.d);

    let word_base = params
        .window_base
        .to_u64()
        .filter(|b| b.checked_add(total).is_some() && len <= 64);
    let count = match word_base {
        Some(base) => (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = base + c * chunk_len;
                (start..start + chunk_len)
                    .filter(|&y| admits(u64::from(parity_word(y, len).count_ones())))
                    .count() as u64
            })
            .sum(),
        None => (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = params.window_base.add_small(c * chunk_len);
                (0..chunk_len)
                    .filter(|&i| admits(parity_sum(&start.add_small(i), params.m, params.variant)))
                    .count() as u64
            })
            .sum(),
    };
    Ok(CensusResult {
        params: params.clone(),
        window_bits,
        count,
        total,
    })
}

/// `C(n, k)` exactly.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Closed-form census over one full period: every parity pattern of the
/// summed length occurs exactly once among `2^len` consecutive residues, so
/// the count is a binomial tail sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCount {
    #[serde(with = "biguint_string")]
    pub count: BigUint,
    /// `log2` of the period the count refers to.
    pub period_bits: u32,
}

pub fn binomial_census_oracle(
    m: u32,
    d: &Ratio<u64>,
    variant: ParityVariant,
    comparator: Comparator,
) -> OracleCount {
    let n = variant.bit_len(m);
    let count = (0..=n)
        .filter(|&j| comparator.admits(u64::from(j), m, d))
        .map(|j| binomial(n, j))
        .sum();
    OracleCount {
        count,
        period_bits: n,
    }
}

/// Parity vectors of every residue in `[0, 2^k)`, indexed by residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueParityTable {
    k: u32,
    vectors: Vec<ParityVector>,
}

impl ResidueParityTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn get(&self, residue: u64) -> Option<&ParityVector> {
        self.vectors.get(usize::try_from(residue).ok()?)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ParityVector)> {
        self.vectors.iter().enumerate().map(|(r, v)| (r as u64, v))
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Builds the residue table and verifies it is a bijection onto `{0,1}^k`.
pub fn residue_parity_table(k: u32) -> Result<ResidueParityTable, CensusError> {
    if k > MAX_TABLE_K {
        return Err(CensusError::TableTooLarge { k, max: MAX_TABLE_K });
    }
    let size = 1usize << k;
    let vectors: Vec<ParityVector> = (0..size as u64)
        .into_par_iter()
        .map(|r| parity_vector(&Natural::from(r), k as usize))
        .collect();
    let mut owner = vec![u64::MAX; size];
    for (r, v) in vectors.iter().enumerate() {
        let word = v.to_word().expect("k <= 20") as usize;
        if owner[word] != u64::MAX {
            return Err(CensusError::NotBijective {
                k,
                first: owner[word],
                second: r as u64,
            });
        }
        owner[word] = r as u64;
    }
    Ok(ResidueParityTable { k, vectors })
}

/// First `y <= y_max` whose length-`k` parity vector differs from that of
/// `y + 2^k`, if any.
pub fn period_violation(k: u32, y_max: u64) -> Option<u64> {
    assert!(k <= 64);
    let period = if k == 64 { None } else { Some(1u64 << k) };
    (0..=y_max).into_par_iter().find_first(|&y| match period.and_then(|p| y.checked_add(p)) {
        Some(shifted) => parity_word(y, k) != parity_word(shifted, k),
        None => {
            let shifted = Natural::from(y).checked_add(&Natural::pow2(k));
            parity_vector(&Natural::from(y), k as usize) != parity_vector(&shifted, k as usize)
        }
    })
}

/// Membership in `L_{m,d} = {y : S_m(y) < m·d}`.
pub fn in_l(y: &Natural, m: u32, d: &Ratio<u64>, variant: ParityVariant) -> bool {
    Comparator::Strict.admits(parity_sum(y, m, variant), m, d)
}

/// An upper bound `2^N > 3^D`, i.e. `N/D > log2(3)`, with `N/D - log2(3) < 1e-9`.
pub const LOG2_3_UPPER: (u64, u64) = (24727, 15601);

/// The admissible range for `d` in the drop lemma at a given `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DThreshold {
    pub big_m: u32,
    /// `(M-2)/(M·log2 3)` in floating point (display only).
    pub value: f64,
    /// A rational strictly below the threshold.
    #[serde(with = "ratio_serde")]
    pub witness: Ratio<u64>,
    /// Whether the threshold exceeds 1/2, so that `d` can also satisfy `d > 1/2`.
    pub exceeds_half: bool,
}

pub fn d_threshold(big_m: u32) -> Result<DThreshold, CensusError> {
    if big_m < 3 {
        return Err(CensusError::ThresholdTooSmall(big_m));
    }
    let value = f64::from(big_m - 2) / (f64::from(big_m) * 3f64.log2());
    // (M-2)/(M·N/D) < (M-2)/(M·log2 3); truncating to 4 digits stays below
    // and keeps the exact check in `below_threshold` cheap.
    let (n, dd) = LOG2_3_UPPER;
    let scale = 10_000u128;
    let num = u128::from(big_m - 2) * u128::from(dd) * scale / (u128::from(big_m) * u128::from(n));
    let witness = Ratio::new(num as u64, scale as u64);
    Ok(DThreshold {
        big_m,
        value,
        witness,
        exceeds_half: below_threshold(big_m, &Ratio::new(1, 2)),
    })
}

/// Exact decision of `d < (M-2)/(M·log2 3)`.
///
/// With `d = p/q` this is `p·M·log2 3 < q·(M-2)`, i.e. `3^{p·M} < 2^{q·(M-2)}`.
pub fn below_threshold(big_m: u32, d: &Ratio<u64>) -> bool {
    if big_m < 3 {
        return false;
    }
    let lhs_exp = u32::try_from(u64::from(big_m) * *d.numer()).expect("exponent too large");
    let rhs_exp = u64::from(big_m - 2) * *d.denom();
    BigUint::from(3u32).pow(lhs_exp) < (BigUint::one() << rhs_exp)
}

/// Which starting values an audit examines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AuditSample {
    /// Every `y` in `[lo, hi]`.
    Range { lo: u64, hi: u64 },
    /// `count` seeded uniform draws from `[lo, hi]`.
    Random { lo: u64, hi: u64, count: u64, seed: u64 },
}

impl AuditSample {
    fn items(&self) -> Result<Vec<u64>, CensusError> {
        match *self {
            AuditSample::Range { lo, hi } => {
                if lo > hi {
                    return Err(CensusError::InvalidSample(format!("inverted range {lo}..{hi}")));
                }
                Ok((lo..=hi).collect())
            }
            AuditSample::Random { lo, hi, count, seed } => {
                if lo > hi {
                    return Err(CensusError::InvalidSample(format!("inverted range {lo}..{hi}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..count).map(|_| rng.gen_range(lo..=hi)).collect())
            }
        }
    }
}

const MAX_REPORTED_VIOLATIONS: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub m: u32,
    #[serde(with = "ratio_serde")]
    pub d: Ratio<u64>,
    pub variant: Option<ParityVariant>,
    /// `d < (m-2)/(m·log2 3)`, decided exactly.
    pub threshold_ok: bool,
    pub items: u64,
    /// Items rejected because `y < m·2^m`.
    pub rejected: u64,
    /// Items outside `L_{m,d}` (nothing to check).
    pub not_in_l: u64,
    pub audited: u64,
    /// Some `T^j(y) < m` for `0 <= j <= m`.
    pub violations_lower: u64,
    /// `T^m(y) >= y·3^k/2^{m-1}` with `k = S_m(y)`.
    pub violations_chain: u64,
    /// `T^m(y) >= y/2`.
    pub violations_drop: u64,
    /// Items with at least one violation.
    pub violations: u64,
    pub violating: Vec<u64>,
}

impl Lemma2Report {
    fn merge(mut self, other: Lemma2Report) -> Lemma2Report {
        self.items += other.items;
        self.rejected += other.rejected;
        self.not_in_l += other.not_in_l;
        self.audited += other.audited;
        self.violations_lower += other.violations_lower;
        self.violations_chain += other.violations_chain;
        self.violations_drop += other.violations_drop;
        self.violations += other.violations;
        self.violating.extend(other.violating);
        self.violating.truncate(MAX_REPORTED_VIOLATIONS);
        self
    }
}

/// Per-item verdict of the drop audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditItem {
    Rejected,
    NotInL,
    Checked { lower: bool, chain: bool, drop: bool },
}

/// Checks the three links of the drop argument for one `y`.
pub fn audit_item(y: &Natural, m: u32, d: &Ratio<u64>, variant: ParityVariant) -> AuditItem {
    let floor = Natural::from(u64::from(m)).to_biguint() << m;
    let y_big = y.to_biguint();
    if y_big < floor {
        return AuditItem::Rejected;
    }
    let k = parity_sum(y, m, variant);
    if !Comparator::Strict.admits(k, m, d) {
        return AuditItem::NotInL;
    }
    let m_nat = Natural::from(m);
    let mut value = y.clone();
    let mut lower = value >= m_nat;
    for _ in 0..m {
        value = value.collatz_step();
        lower &= value >= m_nat;
    }
    let t_m = value.to_biguint();
    let k32 = u32::try_from(k).expect("parity sum fits u32");
    // T^m(y) < y·3^k / 2^{m-1}  <=>  2^{m-1}·T^m(y) < y·3^k
    let chain = (&t_m << (m - 1)) < &y_big * BigUint::from(3u32).pow(k32);
    let drop = (t_m << 1u32) < y_big;
    AuditItem::Checked { lower, chain, drop }
}

/// Audits the drop guarantee for `L_{m,d}` over a sample of starting values.
pub fn lemma2_audit(
    m: u32,
    d: &Ratio<u64>,
    variant: ParityVariant,
    sample: &AuditSample,
) -> Result<Lemma2Report, CensusError> {
    if m == 0 {
        return Err(CensusError::ZeroM);
    }
    let items = sample.items()?;
    let base = Lemma2Report {
        m,
        d: *d,
        variant: Some(variant),
        threshold_ok: below_threshold(m, d),
        ..Default::default()
    };
    let partials: Vec<Lemma2Report> = items
        .par_chunks(4096)
        .map(|chunk| {
            let mut part = Lemma2Report::default();
            for &y in chunk {
                part.items += 1;
                match audit_item(&Natural::from(y), m, d, variant) {
                    AuditItem::Rejected => part.rejected += 1,
                    AuditItem::NotInL => part.not_in_l += 1,
                    AuditItem::Checked { lower, chain, drop } => {
                        part.audited += 1;
                        part.violations_lower += u64::from(!lower);
                        part.violations_chain += u64::from(!chain);
                        part.violations_drop += u64::from(!drop);
                        if !(lower && chain && drop) {
                            part.violations += 1;
                            if part.violating.len() < MAX_REPORTED_VIOLATIONS {
                                part.violating.push(y);
                            }
                        }
                    }
                }
            }
            part
        })
        .collect();
    Ok(partials.into_iter().fold(base, Lemma2Report::merge))
}

pub(crate) mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod ratio_serde {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{format_ratio, parse_ratio};

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let text = String::deserialize(d)?;
        parse_ratio(&text).map_err(serde::de::Error::custom)
    }
}
