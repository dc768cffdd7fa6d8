#![no_main]

use collatz_lab::harness::parse_config_text;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = parse_config_text(text, None) {
        assert_eq!(parse_config_text(&config.render(), None), Ok(config));
    }
});
