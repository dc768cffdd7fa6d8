#![no_main]

use collatz_lab::rational::{format_ratio, parse_ratio};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_ratio(text) {
        assert_eq!(parse_ratio(&format_ratio(&r)), Ok(r));
    }
});
