//! Replays the checked-in fuzz seeds through the same checks the fuzz
//! targets make, so they run under plain `cargo test`.

use std::fs;
use std::path::PathBuf;

use collatz_lab::harness::{decode_record, parse_args, parse_config_text, RangeSpec, SetSpec};
use collatz_lab::rational::{format_ratio, parse_ratio};
use collatz_lab::Natural;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut entries: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    assert!(!entries.is_empty(), "{target} has no seeds");
    entries.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

fn texts(target: &str) -> Vec<String> {
    seeds(target)
        .into_iter()
        .filter_map(|b| String::from_utf8(b).ok())
        .collect()
}

#[test]
fn ratio_seeds() {
    let mut accepted = 0;
    for text in texts("parse_ratio") {
        if let Ok(r) = parse_ratio(&text) {
            assert_eq!(parse_ratio(&format_ratio(&r)), Ok(r));
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn range_seeds() {
    for text in texts("parse_range") {
        if let Ok(range) = RangeSpec::parse(&text) {
            assert!(range.lo <= range.hi);
            assert_eq!(RangeSpec::parse(&range.to_string()), Ok(range));
        }
    }
}

#[test]
fn set_seeds() {
    for text in texts("parse_set") {
        let set = SetSpec::parse(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(SetSpec::parse(&set.to_string()), Ok(set));
    }
}

#[test]
fn natural_seeds() {
    for text in texts("parse_natural") {
        let n: Natural = text.parse().unwrap();
        assert_eq!(n.to_string(), text);
        let json = serde_json::to_string(&n).unwrap();
        assert_eq!(serde_json::from_str::<Natural>(&json).unwrap(), n);
    }
}

#[test]
fn config_seeds() {
    for text in texts("parse_config") {
        let config = parse_config_text(&text, None).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(parse_config_text(&config.render(), None), Ok(config));
    }
}

#[test]
fn argv_seeds() {
    let mut outcomes = Vec::new();
    for text in texts("parse_argv") {
        let mut argv = vec!["collatz-lab".to_string()];
        argv.extend(text.split('\0').map(str::to_string));
        outcomes.push(parse_args(argv).is_ok());
    }
    assert!(outcomes.contains(&true) && outcomes.contains(&false));
}

#[test]
fn cache_record_seeds() {
    let decoded: Vec<bool> = seeds("decode_cache_record")
        .iter()
        .map(|bytes| match decode_record(bytes) {
            Ok(record) => {
                let again = decode_record(&serde_json::to_vec(&record).unwrap()).unwrap();
                assert_eq!(again, record);
                true
            }
            Err(_) => false,
        })
        .collect();
    assert!(decoded.contains(&true) && decoded.contains(&false));
}
