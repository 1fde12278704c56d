//! Persistent point-count cache: one JSON record `{hash, n, count}` per line.
//!
//! The directory holds `counts.ndjson` and a `counts.lock` file that is
//! locked exclusively for the lifetime of a [`DiskCache`], so concurrent
//! invocations sharing a directory take turns.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use picardkit_core::counting::{CountCache, CountError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "PICARDKIT_CACHE";
const DATA_FILE: &str = "counts.ndjson";
const LOCK_FILE: &str = "counts.lock";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub hash: String,
    pub n: u32,
    pub count: u64,
}

/// Hex SHA-256 of a canonical variety description.
pub fn variety_hash(description: &str) -> String {
    hex::encode(Sha256::digest(description.as_bytes()))
}

/// The cache directory: `PICARDKIT_CACHE` if set, else the flag value.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => flag.map(Path::to_path_buf),
    }
}

#[derive(Debug)]
pub struct DiskCache {
    entries: BTreeMap<(String, u32), u64>,
    file: File,
    _lock: File,
    skipped: usize,
}

impl DiskCache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        let lock = OpenOptions::new().create(true).truncate(false).write(true).open(dir.join(LOCK_FILE))?;
        lock.lock()?;
        let path = dir.join(DATA_FILE);
        let mut entries = BTreeMap::new();
        let mut skipped = 0;
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                // a torn final line from an interrupted run is ignored
                match serde_json::from_str::<Record>(&line) {
                    Ok(r) => {
                        entries.insert((r.hash, r.n), r.count);
                    }
                    Err(_) => skipped += 1,
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(DiskCache { entries, file, _lock: lock, skipped })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Unparseable lines seen on open.
    pub fn skipped_lines(&self) -> usize {
        self.skipped
    }
}

impl CountCache for DiskCache {
    fn get(&self, hash: &str, n: u32) -> Option<u64> {
        self.entries.get(&(hash.to_string(), n)).copied()
    }

    fn put(&mut self, hash: &str, n: u32, count: u64) -> Result<(), CountError> {
        if let Some(&old) = self.entries.get(&(hash.to_string(), n)) {
            if old != count {
                return Err(CountError::Cache(format!("cached N_{n} = {old} disagrees with recomputed {count}")));
            }
            return Ok(());
        }
        let rec = Record { hash: hash.to_string(), n, count };
        let mut line = serde_json::to_string(&rec).map_err(|e| CountError::Cache(e.to_string()))?;
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.flush())
            .map_err(|e| CountError::Cache(e.to_string()))?;
        self.entries.insert((rec.hash, n), count);
        Ok(())
    }
}
