//! Advisory on-disk cache for enumeration counts. A missing, unreadable or
//! mismatching cache entry simply triggers a recompute; the cache never
//! changes results, only latency.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::enumeration::FamilySpec;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "KEROV_CACHE_DIR";

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct CacheStore {
    dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct CountEntry {
    schema_version: u32,
    family: String,
    k: usize,
    params: serde_json::Value,
    count: u64,
}

impl CacheStore {
    pub fn disabled() -> Self {
        CacheStore { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        CacheStore {
            dir: Some(dir.into()),
        }
    }

    /// Resolves the cache directory from `KEROV_CACHE_DIR`, falling back to
    /// the platform cache directory (`$XDG_CACHE_HOME` or `~/.cache`) and
    /// finally the system temporary directory.
    pub fn from_env() -> Self {
        if let Ok(dir) = std::env::var(CACHE_DIR_ENV) {
            if !dir.is_empty() {
                return CacheStore::at(dir);
            }
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|home| PathBuf::from(home).join(".cache")))
            .unwrap_or_else(std::env::temp_dir);
        CacheStore::at(base.join("kerov"))
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path_for(&self, spec: &FamilySpec) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(spec.cache_file_name()))
    }

    pub fn load_count(&self, spec: &FamilySpec) -> Option<u64> {
        let path = self.path_for(spec)?;
        let text = fs::read_to_string(path).ok()?;
        let entry: CountEntry = serde_json::from_str(&text).ok()?;
        if entry.schema_version != SCHEMA_VERSION
            || entry.family != spec.family_name()
            || entry.k != spec.k
            || entry.params != spec.params_json()
        {
            return None;
        }
        Some(entry.count)
    }

    pub fn store_count(&self, spec: &FamilySpec, count: u64) {
        let Some(path) = self.path_for(spec) else {
            return;
        };
        let entry = CountEntry {
            schema_version: SCHEMA_VERSION,
            family: spec.family_name().to_string(),
            k: spec.k,
            params: spec.params_json(),
            count,
        };
        if let Some(parent) = path.parent() {
            if fs::create_dir_all(parent).is_err() {
                return;
            }
        }
        let Ok(text) = serde_json::to_string_pretty(&entry) else {
            return;
        };
        let _ = fs::write(path, text);
    }
}
