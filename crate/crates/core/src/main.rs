use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use collatz_lab::harness::{
    cli, config_from_matches, run_with_cache, usage_error, Cache, ConfigError, RunError,
};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let err = usage_error(&e);
            if matches!(err, ConfigError::Usage(_)) {
                let _ = e.print();
            } else {
                eprintln!("error: {err}");
            }
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(matches: &clap::ArgMatches) -> Result<(), RunError> {
    let config = config_from_matches(matches)?;
    let cache = Cache::from_env();
    let record = run_with_cache(&config, cache.as_ref())?;
    match &config.out {
        Some(path) => std::fs::write(path, &record.payload).map_err(|source| RunError::Output {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(record.payload.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| RunError::Output {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    eprintln!(
        "cached={} wall_time_ms={}",
        record.cached, record.wall_time_ms
    );
    Ok(())
}
