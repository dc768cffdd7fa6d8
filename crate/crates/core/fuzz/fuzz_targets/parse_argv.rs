#![no_main]

use collatz_lab::harness::parse_args;
use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated. `--config` is dropped so the target never
// touches the filesystem.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut argv = vec!["collatz-lab".to_string()];
    argv.extend(
        text.split('\0')
            .filter(|a| !a.starts_with("--config"))
            .map(str::to_string),
    );
    if let Ok(config) = parse_args(argv) {
        assert!(config.threads.map_or(true, |t| t >= 1));
        if let Some(range) = config.range {
            assert!(range.lo <= range.hi);
        }
    }
});
