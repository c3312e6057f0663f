//! On-disk cache of the even Bernoulli numbers `B_0, B_2, B_4, ...`.
//!
//! File layout (JSON):
//!
//! ```text
//! {"version": 1, "checksum": "<sha256 hex of the entries array>", "entries": [[0, "1/1"], [2, "1/6"], ...]}
//! ```
//!
//! The cache is advisory. A missing, unreadable or inconsistent file is
//! ignored and the numbers are recomputed; entries must also have the
//! von Staudt-Clausen denominator and the alternating sign of `B_{2i}`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::numtheory::{bernoulli_denominator, bernoulli_snapshot, seed_bernoulli, Rational};
use crate::qseries::{format_rational, parse_rational};

pub const CACHE_ENV: &str = "ZAGIER_PADIC_CACHE_DIR";
const VERSION: u32 = 1;
const FILE_NAME: &str = "bernoulli-v1.json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Loaded(usize),
    Missing,
    Discarded(String),
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    checksum: String,
    entries: Vec<(u64, String)>,
}

/// `$ZAGIER_PADIC_CACHE_DIR`, else `$XDG_CACHE_HOME/zagier-padic`, else `~/.cache/zagier-padic`.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(dir));
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(dir).join("zagier-padic"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("zagier-padic"))
}

pub fn cache_file(dir: &Path) -> PathBuf {
    dir.join(FILE_NAME)
}

fn checksum(entries: &[(u64, String)]) -> String {
    let canonical = serde_json::to_string(entries).expect("entries serialize");
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn validate(file: CacheFile) -> Result<Vec<Rational>, String> {
    if file.version != VERSION {
        return Err(format!("unsupported version {}", file.version));
    }
    if checksum(&file.entries) != file.checksum {
        return Err("checksum mismatch".into());
    }
    let mut table = Vec::with_capacity(file.entries.len());
    for (i, (n, text)) in file.entries.iter().enumerate() {
        if *n != 2 * i as u64 {
            return Err(format!("entry {i} has index {n}"));
        }
        let b = parse_rational(text).map_err(|e| e.to_string())?;
        let ok = if *n == 0 {
            b.is_one()
        } else {
            let sign_ok = if i % 2 == 1 { b.is_positive() } else { b.is_negative() };
            sign_ok && b.denom() == &bernoulli_denominator(*n)
        };
        if !ok {
            return Err(format!("entry B_{n} fails the denominator/sign test"));
        }
        table.push(b);
    }
    Ok(table)
}

/// Loads the cache file in `dir` into the in-memory Bernoulli table.
pub fn load(dir: &Path) -> CacheStatus {
    let text = match fs::read_to_string(cache_file(dir)) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return CacheStatus::Missing,
        Err(e) => return CacheStatus::Discarded(e.to_string()),
    };
    let file: CacheFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => return CacheStatus::Discarded(e.to_string()),
    };
    match validate(file) {
        Ok(table) => {
            let n = table.len();
            seed_bernoulli(table);
            CacheStatus::Loaded(n)
        }
        Err(reason) => CacheStatus::Discarded(reason),
    }
}

/// Writes the current in-memory table to `dir`, replacing the file atomically.
pub fn store(dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let entries: Vec<(u64, String)> = bernoulli_snapshot()
        .iter()
        .enumerate()
        .map(|(i, b)| (2 * i as u64, format_rational(b)))
        .collect();
    let file = CacheFile {
        version: VERSION,
        checksum: checksum(&entries),
        entries,
    };
    let tmp = dir.join(format!("{FILE_NAME}.tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string(&file).expect("cache serializes"))?;
    fs::rename(tmp, cache_file(dir))
}
