#![no_main]

use collatz_lab::harness::decode_record;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(record) = decode_record(data) {
        let bytes = serde_json::to_vec(&record).unwrap();
        assert_eq!(decode_record(&bytes).ok(), Some(record));
    }
});
