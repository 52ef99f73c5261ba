//! Persistent record store for relative Davenport values.
//!
//! One record per line: `group-spec|subset-hash|d-value|witness`, where the
//! group spec is the compact JSON group object, the subset hash is the
//! SHA-256 of the canonical subset JSON, and the witness is a JSON array of
//! elements or `null`. Unreadable lines are skipped with a warning.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::group::{FabGroup, GSequence, SubsetS};

/// Environment variable overriding the cache location.
pub const CACHE_ENV: &str = "RELDAV_CACHE";

/// A stored `(d-value, witness)` pair.
pub type Record = (u64, Option<GSequence>);

#[derive(Debug)]
pub struct DiskCache {
    path: PathBuf,
    entries: HashMap<(String, String), Record>,
    warnings: Vec<String>,
}

pub fn group_key(g: &FabGroup) -> String {
    serde_json::to_string(g).expect("group serializes")
}

pub fn subset_hash(s: &SubsetS) -> String {
    let json = serde_json::to_string(s).expect("subset serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

impl DiskCache {
    /// `$RELDAV_CACHE`, else `~/.cache/reldav/srd-cache.txt`.
    pub fn default_path() -> PathBuf {
        if let Some(p) = std::env::var_os(CACHE_ENV) {
            return PathBuf::from(p);
        }
        let home = std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(|| ".".into());
        home.join(".cache").join("reldav").join("srd-cache.txt")
    }

    /// Loads the file at `path` if it exists. Never fails: unreadable files
    /// and lines become warnings.
    pub fn open(path: impl AsRef<Path>) -> Self {
        let path = path.as_ref().to_path_buf();
        let mut cache = DiskCache {
            path,
            entries: HashMap::new(),
            warnings: Vec::new(),
        };
        let text = match fs::read(&cache.path) {
            Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return cache,
            Err(e) => {
                cache.warn(format!("cannot read cache {}: {e}", cache.path.display()));
                return cache;
            }
        };
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match parse_line(line) {
                Some((key, rec)) => {
                    cache.entries.insert(key, rec);
                }
                None => cache.warn(format!(
                    "skipping malformed cache line {} in {}",
                    lineno + 1,
                    cache.path.display()
                )),
            }
        }
        cache
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.warnings.push(msg);
    }

    pub fn get(&self, g: &FabGroup, s: &SubsetS) -> Option<&Record> {
        self.entries.get(&(group_key(g), subset_hash(s)))
    }

    pub fn contains(&self, g: &FabGroup, s: &SubsetS) -> bool {
        self.get(g, s).is_some()
    }

    /// Drops a record that failed verification so it is not served again.
    pub fn forget(&mut self, g: &FabGroup, s: &SubsetS) {
        self.entries.remove(&(group_key(g), subset_hash(s)));
    }

    /// Adds records in memory and appends the new ones to the file. Write
    /// failures are reported as warnings.
    pub fn put_many(&mut self, g: &FabGroup, records: Vec<(SubsetS, Record)>) {
        let gk = group_key(g);
        let mut lines = String::new();
        for (s, rec) in records {
            let key = (gk.clone(), subset_hash(&s));
            if self.entries.get(&key) == Some(&rec) {
                continue;
            }
            let witness = serde_json::to_string(&rec.1).expect("witness serializes");
            lines.push_str(&format!("{}|{}|{}|{}\n", key.0, key.1, rec.0, witness));
            self.entries.insert(key, rec);
        }
        if lines.is_empty() {
            return;
        }
        if let Err(e) = self.append(&lines) {
            self.warn(format!("cannot write cache {}: {e}", self.path.display()));
        }
    }

    fn append(&self, lines: &str) -> std::io::Result<()> {
        if let Some(dir) = self.path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(lines.as_bytes())
    }
}

fn parse_line(line: &str) -> Option<((String, String), Record)> {
    let mut parts = line.splitn(4, '|');
    let gspec = parts.next()?;
    let hash = parts.next()?;
    let value: u64 = parts.next()?.trim().parse().ok()?;
    let witness: Option<GSequence> = serde_json::from_str(parts.next()?).ok()?;
    let group: FabGroup = serde_json::from_str(gspec).ok()?;
    if hash.len() != 64 || !hash.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    if let Some(w) = &witness {
        if w.len() as u64 != value || w.check_in(&group).is_err() {
            return None;
        }
    }
    Some(((group_key(&group), hash.to_string()), (value, witness)))
}
