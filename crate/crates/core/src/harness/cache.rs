//! On-disk result cache keyed by the SHA-256 of the canonical config.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::output::TOOL_VERSION;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "COLLATZ_LAB_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedRecord {
    pub tool_version: String,
    pub config: String,
    pub seed: u64,
    pub payload: String,
    pub wall_time_ms: u64,
}

/// Decodes a cache file. Any failure means the entry is unusable.
pub fn decode_record(bytes: &[u8]) -> Result<CachedRecord, serde_json::Error> {
    serde_json::from_slice(bytes)
}

pub fn cache_key(canonical: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(TOOL_VERSION.as_bytes());
    hasher.update(b"\n");
    hasher.update(canonical.as_bytes());
    hex::encode(hasher.finalize())
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// Cache at `$COLLATZ_LAB_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, canonical: &str) -> PathBuf {
        self.dir.join(format!("{}.json", cache_key(canonical)))
    }

    /// A stored record for exactly this config, if one exists and decodes.
    pub fn lookup(&self, canonical: &str) -> Option<CachedRecord> {
        let path = self.path_for(canonical);
        let bytes = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return None,
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                return None;
            }
        };
        match decode_record(&bytes) {
            Ok(record) if record.config == canonical && record.tool_version == TOOL_VERSION => {
                Some(record)
            }
            Ok(_) => {
                log::warn!("cache entry {} belongs to another config; recomputing", path.display());
                None
            }
            Err(e) => {
                log::warn!("corrupted cache entry {} ({e}); recomputing", path.display());
                None
            }
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place so readers never see a partial entry.
    pub fn store(&self, record: &CachedRecord) -> io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&record.config);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            cache_key(&record.config),
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let body = serde_json::to_vec(record).map_err(io::Error::other)?;
        let result = (|| {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(&body)?;
            file.sync_all()?;
            fs::rename(&tmp, &path)
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result.map(|()| path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(config: &str) -> CachedRecord {
        CachedRecord {
            tool_version: TOOL_VERSION.into(),
            config: config.into(),
            seed: 0,
            payload: "a,b\n1,2\n".into(),
            wall_time_ms: 5,
        }
    }

    #[test]
    fn store_then_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert!(cache.lookup("command=traj;n=7").is_none());
        cache.store(&record("command=traj;n=7")).unwrap();
        assert_eq!(cache.lookup("command=traj;n=7"), Some(record("command=traj;n=7")));
        assert!(cache.lookup("command=traj;n=7;seed=1").is_none());
        let leftovers: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .filter_map(Result::ok)
            .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty());
    }

    #[test]
    fn corrupted_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        fs::write(cache.path_for("command=traj;n=7"), b"{not json").unwrap();
        assert!(cache.lookup("command=traj;n=7").is_none());
        cache.store(&record("command=traj;n=7")).unwrap();
        assert!(cache.lookup("command=traj;n=7").is_some());
    }

    #[test]
    fn keys_differ_by_config() {
        assert_ne!(cache_key("command=traj;n=7"), cache_key("command=traj;n=8"));
        assert_eq!(cache_key("x").len(), 64);
    }
}
