#![no_main]

use collatz_lab::harness::SetSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = SetSpec::parse(text) {
        assert_eq!(SetSpec::parse(&set.to_string()), Ok(set));
    }
});
