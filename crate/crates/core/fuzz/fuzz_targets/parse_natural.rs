#![no_main]

use collatz_lab::Natural;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(n) = text.parse::<Natural>() {
        assert_eq!(n.to_string().parse::<Natural>().ok(), Some(n.clone()));
        let json = serde_json::to_string(&n).unwrap();
        assert_eq!(serde_json::from_str::<Natural>(&json).ok(), Some(n));
    }
});
