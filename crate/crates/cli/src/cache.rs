//! Content-addressed result cache.
//!
//! Entries live at `<root>/<d0d1>/<d2d3>/<digest>.json` where the digest is the
//! SHA-256 of the canonical request. Writes go to a temporary file in the same
//! directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "VERLINDE_CACHE_DIR";
pub const CACHE_DIR_NAME: &str = ".verlinde-cache";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const TEMP_PREFIX: &str = ".tmp-";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    /// Canonical request text the key was derived from.
    pub request: String,
    pub payload: Value,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub created: u64,
}

impl CacheEntry {
    pub fn new(request: &str, payload: Value) -> Self {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        CacheEntry { key: digest(request), request: request.to_string(), payload, tool_version: TOOL_VERSION.into(), created }
    }
}

#[derive(Debug)]
pub enum Lookup {
    Hit(CacheEntry),
    Miss,
    /// Present but unusable; callers treat this as a miss.
    Corrupt(String),
}

pub fn digest(request: &str) -> String {
    hex::encode(Sha256::digest(request.as_bytes()))
}

/// Serializes with object keys sorted at every level.
pub fn canonical(v: &Value) -> String {
    fn sorted(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut keys: Vec<&String> = m.keys().collect();
                keys.sort();
                Value::Object(keys.into_iter().map(|k| (k.clone(), sorted(&m[k]))).collect())
            }
            Value::Array(a) => Value::Array(a.iter().map(sorted).collect()),
            other => other.clone(),
        }
    }
    sorted(v).to_string()
}

/// `--cache-dir`, then the environment variable, then a dot-directory in the
/// home directory (or the working directory when there is none).
pub fn default_root(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()) {
        return PathBuf::from(p);
    }
    std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")).join(CACHE_DIR_NAME)
}

pub struct Cache {
    root: PathBuf,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct GcStats {
    pub kept: usize,
    pub removed: usize,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.root.join(&key[0..2]).join(&key[2..4]).join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Lookup {
        if key.len() < 4 {
            return Lookup::Miss;
        }
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        match parse_entry(&text) {
            Ok(entry) if entry.key != key => Lookup::Corrupt(format!("{}: stored key {} does not match", path.display(), entry.key)),
            Ok(entry) => Lookup::Hit(entry),
            Err(msg) => Lookup::Corrupt(format!("{}: {msg}", path.display())),
        }
    }

    pub fn put(&self, entry: &CacheEntry) -> std::io::Result<PathBuf> {
        static COUNTER: AtomicU64 = AtomicU64::new(0);
        let path = self.path_for(&entry.key);
        let dir = path.parent().expect("entry paths have a parent");
        fs::create_dir_all(dir)?;
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.subsec_nanos()).unwrap_or(0);
        let tmp = dir.join(format!(
            "{TEMP_PREFIX}{}-{}-{nanos}",
            std::process::id(),
            COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(entry).expect("entries serialize").as_bytes())?;
        f.sync_all()?;
        drop(f);
        if let Err(e) = fs::rename(&tmp, &path) {
            let _ = fs::remove_file(&tmp);
            return Err(e);
        }
        Ok(path)
    }

    /// Every file in the fan-out, with its parse result.
    pub fn entries(&self) -> Vec<(PathBuf, Result<CacheEntry, String>)> {
        let mut out = Vec::new();
        for path in self.files() {
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            let parsed = if name.starts_with(TEMP_PREFIX) {
                Err("leftover temporary file".to_string())
            } else {
                fs::read_to_string(&path).map_err(|e| e.to_string()).and_then(|t| parse_entry(&t)).and_then(|e| {
                    if name != format!("{}.json", e.key) {
                        Err(format!("stored key {} does not match the file name", e.key))
                    } else {
                        Ok(e)
                    }
                })
            };
            out.push((path, parsed));
        }
        out
    }

    /// Removes unreadable entries, leftovers and entries from other tool
    /// versions; with `max_age_secs`, also entries older than that.
    pub fn gc(&self, max_age_secs: Option<u64>) -> std::io::Result<GcStats> {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let mut stats = GcStats::default();
        for (path, entry) in self.entries() {
            let keep = match entry {
                Ok(e) => e.tool_version == TOOL_VERSION && max_age_secs.is_none_or(|age| now.saturating_sub(e.created) <= age),
                Err(_) => false,
            };
            if keep {
                stats.kept += 1;
            } else {
                fs::remove_file(&path)?;
                stats.removed += 1;
            }
        }
        Ok(stats)
    }

    fn files(&self) -> Vec<PathBuf> {
        let mut out = Vec::new();
        let Ok(level1) = fs::read_dir(&self.root) else {
            return out;
        };
        let mut dirs: Vec<PathBuf> = level1.flatten().map(|e| e.path()).filter(|p| p.is_dir()).collect();
        dirs.sort();
        for d in dirs {
            let Ok(level2) = fs::read_dir(&d) else { continue };
            let mut sub: Vec<PathBuf> = level2.flatten().map(|e| e.path()).filter(|p| p.is_dir()).collect();
            sub.sort();
            for s in sub {
                let Ok(files) = fs::read_dir(&s) else { continue };
                let mut names: Vec<PathBuf> = files.flatten().map(|e| e.path()).filter(|p| p.is_file()).collect();
                names.sort();
                out.extend(names);
            }
        }
        out
    }
}

fn parse_entry(text: &str) -> Result<CacheEntry, String> {
    let entry: CacheEntry = serde_json::from_str(text).map_err(|e| format!("unreadable entry ({e})"))?;
    if digest(&entry.request) != entry.key {
        return Err("key is not the digest of the stored request".into());
    }
    Ok(entry)
}
