//! Command-line front end: argument parsing, dispatch, output and caching.

pub mod cache;
pub mod config;
pub mod output;
pub mod run;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Arg, ArgAction, ArgMatches, Command};

pub use cache::{decode_record, Cache, CachedRecord, CACHE_ENV};
pub use config::{
    parse_config_text, parse_layered, ConfigError, ExperimentConfig, OutputFormat, RangeSpec,
    SetSpec, Subcommand,
};
pub use output::{Cell, Payload, TOOL_VERSION};
pub use run::{dispatch, run, run_with_cache, RunError, RunRecord};

/// The clap command: a subcommand name followed by `--key value` flags.
pub fn cli() -> Command {
    let mut about = String::from("Subcommands:\n");
    for command in Subcommand::ALL {
        about.push_str(&format!("  {:<18} {}\n", command.as_str(), command.about()));
    }
    let mut cmd = Command::new(output::TOOL_NAME)
        .version(TOOL_VERSION)
        .about("Exact Collatz parity censuses and finite-scale density experiments")
        .after_help(about)
        .arg(
            Arg::new("command")
                .value_name("SUBCOMMAND")
                .help("operation to run; may instead come from the config file"),
        )
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("flat key=value file; flags override its entries"),
        );
    for key in config::ALL_KEYS {
        cmd = cmd.arg(
            Arg::new(key)
                .long(key)
                .value_name("VALUE")
                .action(ArgAction::Set)
                .allow_hyphen_values(false),
        );
    }
    cmd
}

/// Builds a config from parsed matches, reading `--config` if present.
pub fn config_from_matches(matches: &ArgMatches) -> Result<ExperimentConfig, ConfigError> {
    let file_text = match matches.get_one::<String>("config") {
        Some(path) => std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?,
        None => String::new(),
    };
    let command = matches
        .get_one::<String>("command")
        .map(|c| c.parse::<Subcommand>())
        .transpose()?;
    let flags: Vec<(String, String)> = config::ALL_KEYS
        .iter()
        .filter_map(|&key| {
            matches
                .get_one::<String>(key)
                .map(|v| (key.to_string(), v.clone()))
        })
        .collect();
    parse_layered(&file_text, command, &flags)
}

/// Parses an argument vector (program name first) into a config.
pub fn parse_args<I, T>(args: I) -> Result<ExperimentConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = cli().try_get_matches_from(args).map_err(|e| usage_error(&e))?;
    config_from_matches(&matches)
}

/// Maps a clap failure onto the config error classes; unknown flags count as
/// unknown keys.
pub fn usage_error(err: &clap::Error) -> ConfigError {
    if err.kind() == ErrorKind::UnknownArgument {
        if let Some(ContextValue::String(arg)) = err.get(ContextKind::InvalidArg) {
            let key = arg.trim_start_matches('-');
            let key = key.split_once('=').map_or(key, |(k, _)| k);
            return ConfigError::UnknownKey(key.to_string());
        }
    }
    ConfigError::Usage(err.to_string().trim_end().to_string())
}
