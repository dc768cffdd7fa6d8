//! Experiment configuration: flat `key=value` files and command-line flags
//! share one parsing path, so every value is validated the same way.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::Ratio;

use crate::census::Comparator;
use crate::natural::Natural;
use crate::rational::{format_ratio, parse_ratio, RationalError};
use crate::trajectory::ParityVariant;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{key}: {source}")]
    MalformedRational {
        key: String,
        #[source]
        source: RationalError,
    },
    #[error("inverted range {lo}..{hi}: the lower end must not exceed the upper end")]
    InvertedRange { lo: u64, hi: u64 },
    #[error("unknown subcommand {0:?} (expected one of {list})", list = Subcommand::NAMES.join(", "))]
    UnknownSubcommand(String),
    #[error("no subcommand given")]
    MissingSubcommand,
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("key {key:?} does not apply to {command}")]
    UnsupportedKey { key: String, command: Subcommand },
    #[error("key {0:?} given more than once")]
    DuplicateKey(String),
    #[error("invalid value {value:?} for {key}: expected {expected}")]
    InvalidValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("line {line}: expected key=value, got {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("{command} requires {key}")]
    MissingKey { command: Subcommand, key: &'static str },
    #[error("cannot read config file {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl ConfigError {
    /// Process exit status for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::Usage(_) => 2,
            ConfigError::MalformedRational { .. } => 3,
            ConfigError::InvertedRange { .. } => 4,
            ConfigError::UnknownSubcommand(_) | ConfigError::MissingSubcommand => 5,
            ConfigError::UnknownKey(_)
            | ConfigError::UnsupportedKey { .. }
            | ConfigError::DuplicateKey(_) => 6,
            ConfigError::InvalidValue { .. }
            | ConfigError::MalformedLine { .. }
            | ConfigError::MissingKey { .. } => 7,
            ConfigError::Io { .. } => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subcommand {
    Traj,
    Census,
    Oracle,
    Bijection,
    Lemma2,
    Mscan,
    Himage,
    Profile,
    CheckInclusions,
    CheckCardinality,
    Tpdp,
    Threshold,
}

impl Subcommand {
    pub const ALL: [Subcommand; 12] = [
        Subcommand::Traj,
        Subcommand::Census,
        Subcommand::Oracle,
        Subcommand::Bijection,
        Subcommand::Lemma2,
        Subcommand::Mscan,
        Subcommand::Himage,
        Subcommand::Profile,
        Subcommand::CheckInclusions,
        Subcommand::CheckCardinality,
        Subcommand::Tpdp,
        Subcommand::Threshold,
    ];

    pub const NAMES: [&'static str; 12] = [
        "traj",
        "census",
        "oracle",
        "bijection",
        "lemma2",
        "mscan",
        "himage",
        "profile",
        "check-inclusions",
        "check-cardinality",
        "tpdp",
        "threshold",
    ];

    pub fn as_str(self) -> &'static str {
        let idx = Subcommand::ALL.iter().position(|&c| c == self).expect("listed");
        Subcommand::NAMES[idx]
    }

    pub fn about(self) -> &'static str {
        match self {
            Subcommand::Traj => "print a trajectory with parities",
            Subcommand::Census => "count residues with few odd steps by enumeration",
            Subcommand::Oracle => "binomial tail-sum count over one full period",
            Subcommand::Bijection => "residue to parity-vector table and its bijection/periodicity checks",
            Subcommand::Lemma2 => "audit the drop T^m(y) < y/2 on L_{m,d}",
            Subcommand::Mscan => "scan a range for iterates below a(y^b)",
            Subcommand::Himage => "trajectory image H_f of a finite set",
            Subcommand::Profile => "density profile of a finite set at checkpoints",
            Subcommand::CheckInclusions => "comparison, composition and k-fold inclusions of H_f",
            Subcommand::CheckCardinality => "check |T^m(B)| >= |B|/2^m",
            Subcommand::Tpdp => "injectivity and interval facts for T on evens and odds",
            Subcommand::Threshold => "admissible d range for the drop lemma at M",
        }
    }

    /// Keys accepted by this subcommand besides the common ones.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Subcommand::Traj => &["n", "cap"],
            Subcommand::Census => &["m", "d", "variant", "cmp", "window-base", "window-bits"],
            Subcommand::Oracle => &["m", "d", "variant", "cmp"],
            Subcommand::Bijection => &["k"],
            Subcommand::Lemma2 => &["m", "d", "variant", "range", "samples"],
            Subcommand::Mscan => &["a", "b", "range", "cap", "min-k"],
            Subcommand::Himage => &["a", "b", "range", "set", "cap"],
            Subcommand::Profile => &["set", "range", "checkpoints", "a", "b", "cap", "min-k"],
            Subcommand::CheckInclusions => &["set", "range", "a", "b", "ga", "gb", "k", "cap"],
            Subcommand::CheckCardinality => &["set", "range", "m"],
            Subcommand::Tpdp => &["set", "range"],
            Subcommand::Threshold => &["m"],
        }
    }

    pub fn accepts(self, key: &str) -> bool {
        COMMON_KEYS.contains(&key) || self.keys().contains(&key)
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subcommand {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Subcommand::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Subcommand::ALL[i])
            .ok_or_else(|| ConfigError::UnknownSubcommand(s.to_string()))
    }
}

/// Keys every subcommand accepts.
pub const COMMON_KEYS: [&str; 4] = ["seed", "threads", "out", "format"];

/// Keys that only affect how a run executes, not what it computes.
pub const EXECUTION_KEYS: [&str; 2] = ["threads", "out"];

/// Every recognized key, in rendering order.
pub const ALL_KEYS: [&str; 22] = [
    "n",
    "m",
    "d",
    "variant",
    "cmp",
    "window-base",
    "window-bits",
    "k",
    "a",
    "b",
    "ga",
    "gb",
    "range",
    "cap",
    "min-k",
    "checkpoints",
    "set",
    "samples",
    "seed",
    "threads",
    "out",
    "format",
];

/// Inclusive integer range `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RangeSpec {
    pub lo: u64,
    pub hi: u64,
}

impl RangeSpec {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let invalid = || ConfigError::InvalidValue {
            key: "range".into(),
            value: text.into(),
            expected: "an inclusive range lo..hi",
        };
        let (lo, hi) = text.trim().split_once("..").ok_or_else(invalid)?;
        let lo: u64 = lo.trim().parse().map_err(|_| invalid())?;
        let hi: u64 = hi.trim().parse().map_err(|_| invalid())?;
        if lo > hi {
            return Err(ConfigError::InvertedRange { lo, hi });
        }
        Ok(RangeSpec { lo, hi })
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// How a finite set is drawn from the configured range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetSpec {
    All,
    Evens,
    Odds,
    Multiples(u64),
    /// Seeded Bernoulli subset with inclusion probability `p`.
    Bernoulli(Ratio<u64>),
    List(Vec<u64>),
    /// Members of `M_f` for the configured bound.
    DropSet,
    /// Starting values without a drop (never, or not within the cap).
    DropComplement,
}

impl SetSpec {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let invalid = || ConfigError::InvalidValue {
            key: "set".into(),
            value: text.into(),
            expected: "all, evens, odds, multiples:K, bernoulli:P, list:A,B,..., mf or mf-complement",
        };
        let text = text.trim();
        match text {
            "all" => return Ok(SetSpec::All),
            "evens" => return Ok(SetSpec::Evens),
            "odds" => return Ok(SetSpec::Odds),
            "mf" => return Ok(SetSpec::DropSet),
            "mf-complement" => return Ok(SetSpec::DropComplement),
            _ => {}
        }
        let (kind, arg) = text.split_once(':').ok_or_else(invalid)?;
        match kind {
            "multiples" => match arg.parse::<u64>() {
                Ok(k) if k > 0 => Ok(SetSpec::Multiples(k)),
                _ => Err(invalid()),
            },
            "bernoulli" => {
                let p = parse_ratio(arg).map_err(|source| ConfigError::MalformedRational {
                    key: "set".into(),
                    source,
                })?;
                if p > Ratio::from_integer(1) {
                    return Err(invalid());
                }
                Ok(SetSpec::Bernoulli(p))
            }
            "list" => {
                if arg.is_empty() {
                    return Ok(SetSpec::List(Vec::new()));
                }
                let mut values = arg
                    .split(',')
                    .map(|v| v.trim().parse::<u64>().map_err(|_| invalid()))
                    .collect::<Result<Vec<_>, _>>()?;
                values.sort_unstable();
                values.dedup();
                Ok(SetSpec::List(values))
            }
            _ => Err(invalid()),
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::All => f.write_str("all"),
            SetSpec::Evens => f.write_str("evens"),
            SetSpec::Odds => f.write_str("odds"),
            SetSpec::Multiples(k) => write!(f, "multiples:{k}"),
            SetSpec::Bernoulli(p) => write!(f, "bernoulli:{}", format_ratio(p)),
            SetSpec::List(values) => {
                let parts: Vec<String> = values.iter().map(u64::to_string).collect();
                write!(f, "list:{}", parts.join(","))
            }
            SetSpec::DropSet => f.write_str("mf"),
            SetSpec::DropComplement => f.write_str("mf-complement"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// A fully parsed experiment request.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExperimentConfig {
    pub command: Subcommand,
    pub n: Option<Natural>,
    pub m: Option<u32>,
    pub d: Option<Ratio<u64>>,
    pub variant: Option<ParityVariant>,
    pub cmp: Option<Comparator>,
    pub window_base: Option<Natural>,
    pub window_bits: Option<u32>,
    pub k: Option<u32>,
    pub a: Option<Ratio<u64>>,
    pub b: Option<Ratio<u64>>,
    pub ga: Option<Ratio<u64>>,
    pub gb: Option<Ratio<u64>>,
    pub range: Option<RangeSpec>,
    pub cap: Option<u64>,
    pub min_k: Option<u64>,
    pub checkpoints: Option<Vec<u64>>,
    pub set: Option<SetSpec>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

fn invalid(key: &str, value: &str, expected: &'static str) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str, expected: &'static str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| invalid(key, value, expected))
}

fn rational(key: &str, value: &str) -> Result<Ratio<u64>, ConfigError> {
    parse_ratio(value).map_err(|source| ConfigError::MalformedRational {
        key: key.to_string(),
        source,
    })
}

impl ExperimentConfig {
    pub fn new(command: Subcommand) -> Self {
        ExperimentConfig {
            command,
            n: None,
            m: None,
            d: None,
            variant: None,
            cmp: None,
            window_base: None,
            window_bits: None,
            k: None,
            a: None,
            b: None,
            ga: None,
            gb: None,
            range: None,
            cap: None,
            min_k: None,
            checkpoints: None,
            set: None,
            samples: None,
            seed: None,
            threads: None,
            out: None,
            format: None,
        }
    }

    /// Parses and stores one `key=value` entry.
    pub fn set_key(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !ALL_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        if !self.command.accepts(key) {
            return Err(ConfigError::UnsupportedKey {
                key: key.to_string(),
                command: self.command,
            });
        }
        let v = value.trim();
        match key {
            "n" => self.n = Some(parse_num(key, v, "a natural number")?),
            "m" => self.m = Some(parse_num(key, v, "a non-negative integer")?),
            "d" => self.d = Some(rational(key, v)?),
            "variant" => {
                self.variant = Some(match v {
                    "exclusive" => ParityVariant::Exclusive,
                    "inclusive" => ParityVariant::Inclusive,
                    _ => return Err(invalid(key, value, "exclusive or inclusive")),
                })
            }
            "cmp" => {
                self.cmp = Some(match v {
                    "lt" => Comparator::Strict,
                    "le" => Comparator::Weak,
                    _ => return Err(invalid(key, value, "lt or le")),
                })
            }
            "window-base" => self.window_base = Some(parse_num(key, v, "a natural number")?),
            "window-bits" => self.window_bits = Some(parse_num(key, v, "a non-negative integer")?),
            "k" => self.k = Some(parse_num(key, v, "a non-negative integer")?),
            "a" => self.a = Some(rational(key, v)?),
            "b" => self.b = Some(rational(key, v)?),
            "ga" => self.ga = Some(rational(key, v)?),
            "gb" => self.gb = Some(rational(key, v)?),
            "range" => self.range = Some(RangeSpec::parse(v)?),
            "cap" => match parse_num::<u64>(key, v, "a positive integer")? {
                0 => return Err(invalid(key, value, "a positive integer")),
                cap => self.cap = Some(cap),
            },
            "min-k" => self.min_k = Some(parse_num(key, v, "a non-negative integer")?),
            "checkpoints" => {
                let list = v
                    .split(',')
                    .map(|c| parse_num::<u64>(key, c, "a comma-separated list of positive integers"))
                    .collect::<Result<Vec<_>, _>>()?;
                self.checkpoints = Some(list);
            }
            "set" => self.set = Some(SetSpec::parse(v)?),
            "samples" => self.samples = Some(parse_num(key, v, "a non-negative integer")?),
            "seed" => self.seed = Some(parse_num(key, v, "an unsigned 64-bit integer")?),
            "threads" => match parse_num::<usize>(key, v, "a positive integer")? {
                0 => return Err(invalid(key, value, "a positive integer")),
                t => self.threads = Some(t),
            },
            "out" => {
                if v.is_empty() {
                    return Err(invalid(key, value, "a file path"));
                }
                self.out = Some(PathBuf::from(v));
            }
            "format" => {
                self.format = Some(match v {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => return Err(invalid(key, value, "csv or json")),
                })
            }
            _ => unreachable!("key list checked above"),
        }
        Ok(())
    }

    /// Present entries as `(key, value)` in [`ALL_KEYS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let r = |x: &Ratio<u64>| format_ratio(x);
        let mut out = Vec::new();
        let mut push = |key: &'static str, value: Option<String>| {
            if let Some(v) = value {
                out.push((key, v));
            }
        };
        push("n", self.n.as_ref().map(Natural::to_string));
        push("m", self.m.map(|v| v.to_string()));
        push("d", self.d.as_ref().map(r));
        push("variant", self.variant.map(|v| v.as_str().to_string()));
        push("cmp", self.cmp.map(|c| c.as_str().to_string()));
        push("window-base", self.window_base.as_ref().map(Natural::to_string));
        push("window-bits", self.window_bits.map(|v| v.to_string()));
        push("k", self.k.map(|v| v.to_string()));
        push("a", self.a.as_ref().map(r));
        push("b", self.b.as_ref().map(r));
        push("ga", self.ga.as_ref().map(r));
        push("gb", self.gb.as_ref().map(r));
        push("range", self.range.map(|v| v.to_string()));
        push("cap", self.cap.map(|v| v.to_string()));
        push("min-k", self.min_k.map(|v| v.to_string()));
        push(
            "checkpoints",
            self.checkpoints.as_ref().map(|c| {
                c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            }),
        );
        push("set", self.set.as_ref().map(SetSpec::to_string));
        push("samples", self.samples.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        push("threads", self.threads.map(|v| v.to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("format", self.format.map(|f| f.as_str().to_string()));
        out
    }

    /// Config-file text that parses back to `self`.
    pub fn render(&self) -> String {
        let mut text = format!("command={}\n", self.command);
        for (key, value) in self.entries() {
            text.push_str(&format!("{key}={value}\n"));
        }
        text
    }

    /// One-line identity of what the run computes: execution-only keys are
    /// dropped, so thread count and output path never change it.
    pub fn canonical(&self) -> String {
        let mut parts = vec![format!("command={}", self.command)];
        for (key, value) in self.entries() {
            if !EXECUTION_KEYS.contains(&key) {
                parts.push(format!("{key}={value}"));
            }
        }
        parts.join(";")
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format_or_default(&self) -> OutputFormat {
        self.format.unwrap_or_default()
    }
}

/// Splits config-file text into `(line, key, value)` entries.
pub fn parse_entries(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::MalformedLine {
            line: idx + 1,
            text: raw.to_string(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::MalformedLine {
                line: idx + 1,
                text: raw.to_string(),
            });
        }
        if entries.iter().any(|(_, k, _): &(usize, String, String)| k == key) {
            return Err(ConfigError::DuplicateKey(key.to_string()));
        }
        entries.push((idx + 1, key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// Parses a config file. A `command` entry selects the subcommand unless
/// `command_override` is given.
pub fn parse_config_text(
    text: &str,
    command_override: Option<Subcommand>,
) -> Result<ExperimentConfig, ConfigError> {
    parse_layered(text, command_override, &[])
}

/// Config-file entries overlaid with flag entries; flags win.
pub fn parse_layered(
    file_text: &str,
    command_override: Option<Subcommand>,
    flags: &[(String, String)],
) -> Result<ExperimentConfig, ConfigError> {
    let entries = parse_entries(file_text)?;
    let file_command = entries
        .iter()
        .find(|(_, k, _)| k == "command")
        .map(|(_, _, v)| v.parse::<Subcommand>())
        .transpose()?;
    let command = command_override
        .or(file_command)
        .ok_or(ConfigError::MissingSubcommand)?;
    let mut config = ExperimentConfig::new(command);
    for (_, key, value) in entries.iter().filter(|(_, k, _)| k != "command") {
        if flags.iter().any(|(k, _)| k == key) {
            continue;
        }
        config.set_key(key, value)?;
    }
    for (key, value) in flags {
        config.set_key(key, value)?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn census_flags() -> Vec<(String, String)> {
        [("m", "20"), ("d", "3/5"), ("variant", "exclusive"), ("cmp", "lt")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn census_flags_parse() {
        let cfg = parse_layered("", Some(Subcommand::Census), &census_flags()).unwrap();
        assert_eq!(cfg.m, Some(20));
        assert_eq!(cfg.d, Some(Ratio::new(3, 5)));
        assert_eq!(cfg.variant, Some(ParityVariant::Exclusive));
        assert_eq!(cfg.cmp, Some(Comparator::Strict));
    }

    #[test]
    fn decimal_d_is_rejected() {
        let err = parse_layered("", Some(Subcommand::Census), &[("d".into(), "0.6".into())])
            .unwrap_err();
        assert!(err.to_string().contains("3/5"), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn inverted_range_is_rejected() {
        let err = parse_layered("", Some(Subcommand::Mscan), &[("range".into(), "10..5".into())])
            .unwrap_err();
        assert_eq!(err, ConfigError::InvertedRange { lo: 10, hi: 5 });
        assert!(err.to_string().contains("inverted range"));
    }

    #[test]
    fn unknown_subcommand_and_keys() {
        assert!(matches!(
            "frobnicate".parse::<Subcommand>(),
            Err(ConfigError::UnknownSubcommand(_))
        ));
        let err = parse_config_text("command=census\nbogus=1\n", None).unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey("bogus".into()));
        let err = parse_config_text("command=traj\nd=1/2\n", None).unwrap_err();
        assert!(matches!(err, ConfigError::UnsupportedKey { .. }));
        let err = parse_config_text("m=3\n", None).unwrap_err();
        assert_eq!(err, ConfigError::MissingSubcommand);
    }

    #[test]
    fn distinct_exit_codes() {
        let errors = [
            ConfigError::MalformedRational {
                key: "d".into(),
                source: RationalError::Malformed("x".into()),
            },
            ConfigError::InvertedRange { lo: 2, hi: 1 },
            ConfigError::UnknownSubcommand("x".into()),
        ];
        let codes: Vec<i32> = errors.iter().map(ConfigError::exit_code).collect();
        assert_eq!(codes, vec![3, 4, 5]);
        assert!(codes.iter().all(|&c| c != 0));
    }

    #[test]
    fn flags_override_file() {
        let file = "command=census\nm=12\nd=1/2\n";
        let cfg = parse_layered(file, None, &[("m".into(), "14".into())]).unwrap();
        assert_eq!(cfg.m, Some(14));
        assert_eq!(cfg.d, Some(Ratio::new(1, 2)));
    }

    #[test]
    fn file_comments_and_errors() {
        let cfg = parse_config_text("# census run\n\ncommand = census\n m = 4 \n", None).unwrap();
        assert_eq!(cfg.m, Some(4));
        assert!(matches!(
            parse_config_text("command=census\njunk\n", None),
            Err(ConfigError::MalformedLine { line: 2, .. })
        ));
        assert_eq!(
            parse_config_text("command=census\nm=1\nm=2\n", None),
            Err(ConfigError::DuplicateKey("m".into()))
        );
    }

    #[test]
    fn canonical_ignores_execution_keys() {
        let mut a = parse_layered("", Some(Subcommand::Census), &census_flags()).unwrap();
        let b = a.clone();
        a.threads = Some(8);
        a.out = Some("x.csv".into());
        assert_eq!(a.canonical(), b.canonical());
        let mut c = b.clone();
        c.seed = Some(1);
        assert_ne!(c.canonical(), b.canonical());
    }

    #[test]
    fn set_specs() {
        assert_eq!(SetSpec::parse("multiples:3"), Ok(SetSpec::Multiples(3)));
        assert_eq!(SetSpec::parse("list:10,3,3"), Ok(SetSpec::List(vec![3, 10])));
        assert_eq!(
            SetSpec::parse("bernoulli:1/10"),
            Ok(SetSpec::Bernoulli(Ratio::new(1, 10)))
        );
        assert!(SetSpec::parse("bernoulli:3/2").is_err());
        assert!(SetSpec::parse("multiples:0").is_err());
        assert!(SetSpec::parse("primes").is_err());
    }

    #[test]
    fn zero_threads_rejected() {
        assert!(parse_layered("", Some(Subcommand::Traj), &[("threads".into(), "0".into())]).is_err());
    }
}
