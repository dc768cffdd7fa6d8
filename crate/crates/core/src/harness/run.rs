//! Dispatch from a parsed config to the library, inside a sized worker pool.

use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::Value;

use super::cache::{Cache, CachedRecord};
use super::config::{ConfigError, ExperimentConfig, RangeSpec, SetSpec, Subcommand};
use super::output::{self, Cell, Payload, TOOL_VERSION};
use crate::bound::{BoundError, BoundFunction};
use crate::census::{
    binomial_census_oracle, census_window, d_threshold, lemma2_audit, period_violation,
    residue_parity_table, AuditSample, CensusError, CensusParams, DEFAULT_MAX_M,
    MAX_TABLE_K,
};
use crate::density::{
    bernoulli_subset, density_profile, h_image, h_inclusion_check, image_cardinality_check,
    m_scan, t_pdp_example_check, DensityError, DensityProfile, FiniteSet,
};
use crate::natural::Natural;
use crate::rational::{decimal_string, format_ratio};
use crate::stopping::{first_drop_outcome, DropOutcome};
use crate::trajectory::{trajectory, ParityVariant, DEFAULT_CAP};

/// Largest `m` the binomial oracle accepts from the command line.
pub const ORACLE_MAX_M: u32 = 4096;

/// Largest range a set or audit is materialized over.
pub const MAX_MATERIALIZED: u64 = 1 << 26;

const RATIO_DIGITS: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{command}: {source}")]
    Census {
        command: Subcommand,
        #[source]
        source: CensusError,
    },
    #[error("{command}: {source}")]
    Density {
        command: Subcommand,
        #[source]
        source: DensityError,
    },
    #[error("{command}: {source}")]
    Bound {
        command: Subcommand,
        #[source]
        source: BoundError,
    },
    #[error("{command}: {message}")]
    Limit { command: Subcommand, message: String },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(e) => e.exit_code(),
            RunError::Output { .. } => 8,
            _ => 1,
        }
    }
}

/// Outcome of a run. `payload` is the exact output-file content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub payload: String,
    pub wall_time_ms: u64,
    pub tool_version: String,
    pub seed: u64,
    pub cached: bool,
}

/// Runs without a cache.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord, RunError> {
    run_with_cache(config, None)
}

/// Runs, serving from and filling `cache` when given. Cache write failures
/// are logged and do not fail the run.
pub fn run_with_cache(config: &ExperimentConfig, cache: Option<&Cache>) -> Result<RunRecord, RunError> {
    let canonical = config.canonical();
    let seed = config.seed_or_default();
    if let Some(hit) = cache.and_then(|c| c.lookup(&canonical)) {
        return Ok(RunRecord {
            config: config.clone(),
            payload: hit.payload,
            wall_time_ms: hit.wall_time_ms,
            tool_version: hit.tool_version,
            seed,
            cached: true,
        });
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
    let start = Instant::now();
    let payload = pool.install(|| dispatch(config))?;
    let text = output::render(&payload, config);
    let wall_time_ms = start.elapsed().as_millis() as u64;
    if let Some(cache) = cache {
        let record = CachedRecord {
            tool_version: TOOL_VERSION.into(),
            config: canonical,
            seed,
            payload: text.clone(),
            wall_time_ms,
        };
        if let Err(e) = cache.store(&record) {
            log::warn!("could not store cache entry in {}: {e}", cache.dir().display());
        }
    }
    Ok(RunRecord {
        config: config.clone(),
        payload: text,
        wall_time_ms,
        tool_version: TOOL_VERSION.into(),
        seed,
        cached: false,
    })
}

/// Computes the payload for `config` on the current thread pool.
pub fn dispatch(config: &ExperimentConfig) -> Result<Payload, RunError> {
    let ctx = Ctx { config };
    match config.command {
        Subcommand::Traj => ctx.traj(),
        Subcommand::Census => ctx.census(),
        Subcommand::Oracle => ctx.oracle(),
        Subcommand::Bijection => ctx.bijection(),
        Subcommand::Lemma2 => ctx.lemma2(),
        Subcommand::Mscan => ctx.mscan(),
        Subcommand::Himage => ctx.himage(),
        Subcommand::Profile => ctx.profile(),
        Subcommand::CheckInclusions => ctx.check_inclusions(),
        Subcommand::CheckCardinality => ctx.check_cardinality(),
        Subcommand::Tpdp => ctx.tpdp(),
        Subcommand::Threshold => ctx.threshold(),
    }
}

struct Ctx<'a> {
    config: &'a ExperimentConfig,
}

fn ratio_cells(r: &Ratio<u64>) -> [Cell; 2] {
    [Cell::Int(*r.numer()), Cell::Int(*r.denom())]
}

fn naturals_json(values: &[Natural]) -> Value {
    serde_json::to_value(values).expect("naturals serialize")
}

impl Ctx<'_> {
    fn cmd(&self) -> Subcommand {
        self.config.command
    }

    fn require<T: Clone>(&self, value: &Option<T>, key: &'static str) -> Result<T, RunError> {
        value.clone().ok_or(RunError::Config(ConfigError::MissingKey {
            command: self.cmd(),
            key,
        }))
    }

    fn census_err(&self, source: CensusError) -> RunError {
        RunError::Census {
            command: self.cmd(),
            source,
        }
    }

    fn density_err(&self, source: DensityError) -> RunError {
        RunError::Density {
            command: self.cmd(),
            source,
        }
    }

    fn limit(&self, message: String) -> RunError {
        RunError::Limit {
            command: self.cmd(),
            message,
        }
    }

    fn bound(&self, a: Option<Ratio<u64>>, b: Option<Ratio<u64>>) -> Result<BoundFunction, RunError> {
        let one = Ratio::from_integer(1);
        BoundFunction::new(a.unwrap_or(one), b.unwrap_or(one)).map_err(|source| RunError::Bound {
            command: self.cmd(),
            source,
        })
    }

    fn f(&self) -> Result<BoundFunction, RunError> {
        self.bound(self.config.a, self.config.b)
    }

    fn variant(&self) -> ParityVariant {
        self.config.variant.unwrap_or(ParityVariant::Exclusive)
    }

    fn cap(&self) -> u64 {
        self.config.cap.unwrap_or(DEFAULT_CAP)
    }

    fn bounded_range(&self) -> Result<RangeSpec, RunError> {
        let range = self.require(&self.config.range, "range")?;
        if range.hi - range.lo >= MAX_MATERIALIZED {
            return Err(self.limit(format!(
                "range {range} holds more than {MAX_MATERIALIZED} values"
            )));
        }
        Ok(range)
    }

    /// Materializes the configured set within the configured range.
    fn set(&self) -> Result<FiniteSet, RunError> {
        let spec = self.config.set.clone().unwrap_or(SetSpec::All);
        if let (SetSpec::List(values), None) = (&spec, self.config.range) {
            return Ok(values.iter().copied().collect());
        }
        let RangeSpec { lo, hi } = self.bounded_range()?;
        let seed = self.config.seed_or_default();
        let set = match spec {
            SetSpec::All => FiniteSet::interval(lo, hi),
            SetSpec::Evens => (lo..=hi).filter(|v| v % 2 == 0).collect(),
            SetSpec::Odds => (lo..=hi).filter(|v| v % 2 == 1).collect(),
            SetSpec::Multiples(k) => (lo..=hi).filter(|v| v % k == 0).collect(),
            SetSpec::Bernoulli(p) => bernoulli_subset(lo, hi, p, seed),
            SetSpec::List(values) => values.into_iter().filter(|v| (lo..=hi).contains(v)).collect(),
            SetSpec::DropSet | SetSpec::DropComplement => {
                let want = matches!(spec, SetSpec::DropSet);
                let f = self.f()?;
                let (cap, min_k) = (self.cap(), self.config.min_k.unwrap_or(0));
                (lo..=hi)
                    .into_par_iter()
                    .filter(|&y| {
                        let hit = matches!(
                            first_drop_outcome(&Natural::from(y), &f, cap, min_k),
                            DropOutcome::Dropped(_)
                        );
                        hit == want
                    })
                    .collect::<Vec<u64>>()
                    .into_iter()
                    .collect()
            }
        };
        Ok(set)
    }

    fn traj(&self) -> Result<Payload, RunError> {
        let n = self.require(&self.config.n, "n")?;
        let record = trajectory(&n, self.cap());
        let mut p = Payload::new(&["step", "value", "parity"]);
        for (j, v) in record.iterates.iter().enumerate() {
            p.row(vec![
                Cell::from(j),
                Cell::BigInt(v.to_string()),
                Cell::from(u64::from(v.is_odd())),
            ]);
        }
        p.note(format!("terminated_by={}", record.terminated_by.as_str()));
        p.note(format!("steps={}", record.steps));
        p.extra("terminated_by", Value::from(record.terminated_by.as_str()));
        p.extra("steps", Value::from(record.steps));
        Ok(p)
    }

    fn census(&self) -> Result<Payload, RunError> {
        let m = self.require(&self.config.m, "m")?;
        let d = self.require(&self.config.d, "d")?;
        let params = CensusParams::new(m, d, self.variant(), self.config.cmp.unwrap_or_default())
            .with_base(self.config.window_base.clone().unwrap_or(Natural::ZERO));
        let bits = self.config.window_bits.unwrap_or(m);
        let result = census_window(&params, bits, DEFAULT_MAX_M).map_err(|e| self.census_err(e))?;
        let mut p = Payload::new(&[
            "m",
            "d_num",
            "d_den",
            "variant",
            "cmp",
            "window_base",
            "count",
            "total",
            "ratio_decimal",
        ]);
        let [dn, dd] = ratio_cells(&d);
        p.row(vec![
            Cell::from(m),
            dn,
            dd,
            params.variant.as_str().into(),
            params.comparator.as_str().into(),
            Cell::BigInt(params.window_base.to_string()),
            Cell::from(result.count),
            Cell::from(result.total),
            result.ratio_decimal().into(),
        ]);
        p.note(format!("window_bits={bits}"));
        p.note(format!("ratio={}", format_ratio(&result.ratio())));
        p.extra("ratio", Value::from(format_ratio(&result.ratio())));
        Ok(p)
    }

    fn oracle(&self) -> Result<Payload, RunError> {
        let m = self.require(&self.config.m, "m")?;
        let d = self.require(&self.config.d, "d")?;
        if m == 0 {
            return Err(self.census_err(CensusError::ZeroM));
        }
        if m > ORACLE_MAX_M {
            return Err(self.limit(format!("m = {m} exceeds {ORACLE_MAX_M}")));
        }
        let (variant, cmp) = (self.variant(), self.config.cmp.unwrap_or_default());
        let oracle = binomial_census_oracle(m, &d, variant, cmp);
        let total = BigUint::from(1u8) << oracle.period_bits;
        let mut p = Payload::new(&[
            "m",
            "d_num",
            "d_den",
            "variant",
            "cmp",
            "period_bits",
            "count",
            "total",
            "ratio_decimal",
        ]);
        let [dn, dd] = ratio_cells(&d);
        p.row(vec![
            Cell::from(m),
            dn,
            dd,
            variant.as_str().into(),
            cmp.as_str().into(),
            Cell::from(oracle.period_bits),
            Cell::BigInt(oracle.count.to_string()),
            Cell::BigInt(total.to_string()),
            big_decimal(&oracle.count, &total, RATIO_DIGITS).into(),
        ]);
        Ok(p)
    }

    fn bijection(&self) -> Result<Payload, RunError> {
        let k = self.require(&self.config.k, "k")?;
        if k > MAX_TABLE_K {
            return Err(self.census_err(CensusError::TableTooLarge { k, max: MAX_TABLE_K }));
        }
        let table = residue_parity_table(k).map_err(|e| self.census_err(e))?;
        let y_max = (1u64 << k) * 4 - 1;
        let violation = period_violation(k, y_max);
        let mut p = Payload::new(&["residue", "parity_vector", "ones"]);
        for (r, v) in table.iter() {
            p.row(vec![Cell::from(r), v.to_string().into(), Cell::from(v.ones())]);
        }
        p.note(format!("k={k} residues={} bijective=true", table.len()));
        p.note(format!(
            "period_checked_through={y_max} period_violation={}",
            violation.map_or("none".to_string(), |y| y.to_string())
        ));
        p.extra("bijective", Value::from(true));
        p.extra("period_violation", violation.map_or(Value::Null, Value::from));
        Ok(p)
    }

    fn lemma2(&self) -> Result<Payload, RunError> {
        let m = self.require(&self.config.m, "m")?;
        let d = self.require(&self.config.d, "d")?;
        let RangeSpec { lo, hi } = self.require(&self.config.range, "range")?;
        let sample = match self.config.samples {
            Some(count) => {
                if count > MAX_MATERIALIZED {
                    return Err(self.limit(format!("samples = {count} exceeds {MAX_MATERIALIZED}")));
                }
                AuditSample::Random {
                    lo,
                    hi,
                    count,
                    seed: self.config.seed_or_default(),
                }
            }
            None => AuditSample::Range { lo, hi },
        };
        if self.config.samples.is_none() {
            self.bounded_range()?;
        }
        let report = lemma2_audit(m, &d, self.variant(), &sample).map_err(|e| self.census_err(e))?;
        let mut p = Payload::new(&[
            "m",
            "d_num",
            "d_den",
            "variant",
            "threshold_ok",
            "items",
            "rejected",
            "not_in_l",
            "audited",
            "violations_lower",
            "violations_chain",
            "violations_drop",
            "violations",
        ]);
        let [dn, dd] = ratio_cells(&d);
        p.row(vec![
            Cell::from(m),
            dn,
            dd,
            self.variant().as_str().into(),
            Cell::from(report.threshold_ok),
            Cell::from(report.items),
            Cell::from(report.rejected),
            Cell::from(report.not_in_l),
            Cell::from(report.audited),
            Cell::from(report.violations_lower),
            Cell::from(report.violations_chain),
            Cell::from(report.violations_drop),
            Cell::from(report.violations),
        ]);
        p.extra("violating", Value::from(report.violating.clone()));
        Ok(p)
    }

    fn mscan(&self) -> Result<Payload, RunError> {
        let f = self.f()?;
        let RangeSpec { lo, hi } = self.require(&self.config.range, "range")?;
        let report = m_scan(&f, lo, hi, self.cap(), self.config.min_k.unwrap_or(0))
            .map_err(|e| self.density_err(e))?;
        let one = Ratio::from_integer(1);
        let mut p = Payload::new(&[
            "a_num",
            "a_den",
            "b_num",
            "b_den",
            "lo",
            "hi",
            "cap",
            "resolved",
            "unresolved_count",
            "fraction",
        ]);
        let [an, ad] = ratio_cells(&self.config.a.unwrap_or(one));
        let [bn, bd] = ratio_cells(&self.config.b.unwrap_or(one));
        p.row(vec![
            an,
            ad,
            bn,
            bd,
            Cell::from(lo),
            Cell::from(hi),
            Cell::from(report.cap),
            Cell::from(report.resolved),
            Cell::from(report.unresolved.len()),
            format_ratio(&report.fraction()).into(),
        ]);
        p.note(format!("total={} never={}", report.total, report.never.len()));
        p.note(format!("fraction_decimal={}", report.fraction_decimal()));
        p.extra("unresolved", Value::from(report.unresolved.clone()));
        p.extra("never", Value::from(report.never.clone()));
        Ok(p)
    }

    fn himage(&self) -> Result<Payload, RunError> {
        let f = self.f()?;
        let set = self.set()?;
        let result = h_image(&set, &f, self.cap()).map_err(|e| self.density_err(e))?;
        let mut p = Payload::new(&["value"]);
        for v in result.image.iter() {
            p.row(vec![Cell::BigInt(v.to_string())]);
        }
        p.note(format!(
            "source_size={} image_size={} saturated_sources={}",
            set.len(),
            result.image.len(),
            result.saturated_sources.len()
        ));
        p.extra("saturated_sources", naturals_json(&result.saturated_sources));
        Ok(p)
    }

    fn profile(&self) -> Result<Payload, RunError> {
        let checkpoints = self.require(&self.config.checkpoints, "checkpoints")?;
        let set = self.set()?;
        let profile = density_profile(&set, &checkpoints).map_err(|e| self.density_err(e))?;
        let mut p = Payload::new(&["n", "count", "ratio", "ratio_decimal", "tail"]);
        for (i, ((&n, &count), r)) in profile
            .checkpoints
            .iter()
            .zip(&profile.counts)
            .zip(&profile.ratios)
            .enumerate()
        {
            p.row(vec![
                Cell::from(n),
                Cell::from(count),
                format_ratio(r).into(),
                DensityProfile::decimal(r).into(),
                Cell::from(i >= profile.burn_in),
            ]);
        }
        p.note(format!("set_size={} burn_in={}", set.len(), profile.burn_in));
        p.note(format!(
            "tail_sup={} tail_inf={}",
            format_ratio(&profile.tail_sup),
            format_ratio(&profile.tail_inf)
        ));
        p.extra("tail_sup", Value::from(format_ratio(&profile.tail_sup)));
        p.extra("tail_inf", Value::from(format_ratio(&profile.tail_inf)));
        Ok(p)
    }

    fn check_inclusions(&self) -> Result<Payload, RunError> {
        let f = self.f()?;
        let g = self.bound(self.config.ga.or(self.config.a), self.config.gb.or(self.config.b))?;
        let set = self.set()?;
        let k = self.config.k.unwrap_or(2);
        let report = h_inclusion_check(&set, &f, &g, k, self.cap()).map_err(|e| self.density_err(e))?;
        let mut p = Payload::new(&[
            "check",
            "lhs_size",
            "rhs_size",
            "holds",
            "witness",
            "saturated_sources",
        ]);
        for check in report.checks() {
            p.row(vec![
                check.name.as_str().into(),
                Cell::from(check.lhs_size),
                Cell::from(check.rhs_size),
                match check.holds {
                    Some(h) => Cell::from(h),
                    None => "void".into(),
                },
                check.witness.as_ref().map(|w| Cell::BigInt(w.to_string())).unwrap_or(Cell::Empty),
                Cell::from(check.saturated_sources.len()),
            ]);
        }
        p.note(format!("f={f} g={g} k={k} set_size={}", set.len()));
        p.note(format!("all_hold={}", report.all_hold()));
        p.extra("all_hold", Value::from(report.all_hold()));
        Ok(p)
    }

    fn check_cardinality(&self) -> Result<Payload, RunError> {
        let m = self.require(&self.config.m, "m")?;
        if m > 4096 {
            return Err(self.limit(format!("m = {m} exceeds 4096")));
        }
        let set = self.set()?;
        let report = image_cardinality_check(&set, m);
        let mut p = Payload::new(&["m", "source_size", "image_size", "holds"]);
        p.row(vec![
            Cell::from(report.m),
            Cell::from(report.source_size),
            Cell::from(report.image_size),
            Cell::from(report.holds),
        ]);
        Ok(p)
    }

    fn tpdp(&self) -> Result<Payload, RunError> {
        let RangeSpec { hi, .. } = self.bounded_range()?;
        let set = self.set()?;
        let r = t_pdp_example_check(&set, hi).map_err(|e| self.density_err(e))?;
        let mut p = Payload::new(&[
            "n",
            "evens",
            "odds",
            "even_image_size",
            "odd_image_size",
            "even_ok",
            "odd_ok",
            "density_a",
            "density_image",
            "density_even_image",
            "density_odd_image",
        ]);
        p.row(vec![
            Cell::from(r.n),
            Cell::from(r.evens),
            Cell::from(r.odds),
            Cell::from(r.even_image_size),
            Cell::from(r.odd_image_size),
            Cell::from(r.even_ok),
            Cell::from(r.odd_ok),
            format_ratio(&r.density_a).into(),
            format_ratio(&r.density_image).into(),
            format_ratio(&r.density_even_image).into(),
            format_ratio(&r.density_odd_image).into(),
        ]);
        Ok(p)
    }

    fn threshold(&self) -> Result<Payload, RunError> {
        let m = self.require(&self.config.m, "m")?;
        let t = d_threshold(m).map_err(|e| self.census_err(e))?;
        let mut p = Payload::new(&["big_m", "value", "witness", "exceeds_half"]);
        p.row(vec![
            Cell::from(t.big_m),
            format!("{:.6}", t.value).into(),
            format_ratio(&t.witness).into(),
            Cell::from(t.exceeds_half),
        ]);
        Ok(p)
    }
}

fn big_decimal(num: &BigUint, den: &BigUint, digits: usize) -> String {
    if let (Some(n), Some(d)) = (u128::try_from(num).ok(), u128::try_from(den).ok()) {
        if n.checked_mul(10u128.pow(digits as u32)).is_some() {
            return decimal_string(n, d, digits);
        }
    }
    let scaled = num * BigUint::from(10u8).pow(digits as u32) / den;
    let text = format!("{scaled:0>width$}", width = digits + 1);
    let (int, frac) = text.split_at(text.len() - digits);
    format!("{int}.{frac}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::parse_layered;

    fn cfg(command: Subcommand, flags: &[(&str, &str)]) -> ExperimentConfig {
        let flags: Vec<(String, String)> =
            flags.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        parse_layered("", Some(command), &flags).unwrap()
    }

    fn data_lines(text: &str) -> Vec<&str> {
        text.lines().filter(|l| !l.starts_with('#')).collect()
    }

    #[test]
    fn census_row_matches_oracle() {
        let record = run(&cfg(Subcommand::Census, &[("m", "12"), ("d", "3/5")])).unwrap();
        let lines = data_lines(&record.payload);
        assert_eq!(lines[0], "m,d_num,d_den,variant,cmp,window_base,count,total,ratio_decimal");
        // C(12,0..=7) summed.
        let oracle: u64 = [1, 12, 66, 220, 495, 792, 924, 792].iter().sum();
        assert_eq!(lines[1], format!("12,3,5,exclusive,lt,0,{oracle},4096,0.{:0>12}", oracle * 1_000_000_000_000 / 4096));
        assert!(!record.cached);
    }

    #[test]
    fn oracle_row() {
        let record = run(&cfg(Subcommand::Oracle, &[("m", "20"), ("d", "3/5"), ("cmp", "le")])).unwrap();
        let lines = data_lines(&record.payload);
        assert!(lines[1].starts_with("20,3,5,exclusive,le,20,910596,1048576,0.868412"), "{}", lines[1]);
    }

    #[test]
    fn mscan_row() {
        let record = run(&cfg(
            Subcommand::Mscan,
            &[("a", "1/2"), ("b", "1"), ("range", "3..2000"), ("cap", "10000")],
        ))
        .unwrap();
        let lines = data_lines(&record.payload);
        assert_eq!(lines[1], "1,2,1,1,3,2000,10000,1998,0,1/1");
    }

    #[test]
    fn big_decimal_matches_small_path() {
        let (n, d) = (BigUint::from(910596u32), BigUint::from(1u32 << 20));
        assert_eq!(big_decimal(&n, &d, 6), "0.868412");
        let huge = BigUint::from(1u8) << 200;
        assert_eq!(big_decimal(&huge, &(&huge << 1), 3), "0.500");
        assert_eq!(big_decimal(&(&huge * 3u8), &huge, 2), "3.00");
    }

    #[test]
    fn missing_key_is_reported() {
        let err = run(&cfg(Subcommand::Census, &[("m", "4")])).unwrap_err();
        assert!(matches!(err, RunError::Config(ConfigError::MissingKey { key: "d", .. })));
    }
}
