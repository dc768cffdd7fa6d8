#![no_main]

use collatz_lab::harness::RangeSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(range) = RangeSpec::parse(text) {
        assert!(range.lo <= range.hi);
        assert_eq!(RangeSpec::parse(&range.to_string()), Ok(range));
    }
});
