//! Line-delimited JSON persistence for Sidon estimates.
//!
//! One JSON document per line with fields
//! `{m, n, q, d, p, lower, upper, method, budget, seed, created_at}`
//! (`q` and `p` as numbers or the string `"inf"`). Readers tolerate unknown
//! extra fields and skip corrupt lines with a warning count; writers upsert
//! idempotently, keeping the tighter bounds per full key.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::sidon::SidonMethod;
use crate::spaces::Exponent;
use crate::Result;

/// One persisted estimate line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub m: u32,
    pub n: usize,
    pub q: Exponent,
    pub d: usize,
    pub p: Exponent,
    pub lower: f64,
    pub upper: f64,
    pub method: SidonMethod,
    pub budget: u64,
    pub seed: u64,
    pub created_at: u64,
    /// Extension field: whether `lower` carries a certificate. Readers that
    /// do not know it ignore it; absent means false.
    #[serde(default)]
    pub certified: bool,
    /// Extension field: digest of the witness coefficients, when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_hash: Option<String>,
}

/// Identity of a record for upsert purposes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheKey {
    pub m: u32,
    pub n: usize,
    pub q: Exponent,
    pub d: usize,
    pub p: Exponent,
    pub budget: u64,
    pub seed: u64,
}

impl CacheRecord {
    pub fn key(&self) -> CacheKey {
        CacheKey {
            m: self.m,
            n: self.n,
            q: self.q,
            d: self.d,
            p: self.p,
            budget: self.budget,
            seed: self.seed,
        }
    }

    /// True when `self` is at least as tight as `other` on both ends.
    fn at_least_as_tight(&self, other: &CacheRecord) -> bool {
        self.lower >= other.lower && self.upper <= other.upper
    }
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Parsed cache contents plus the number of corrupt lines skipped.
#[derive(Debug, Default)]
pub struct CacheContents {
    pub records: Vec<CacheRecord>,
    pub corrupt_lines: usize,
}

/// Read all records; a missing file is an empty cache. Corrupt lines are
/// counted, never fatal.
pub fn read_records(path: &Path) -> Result<CacheContents> {
    let mut contents = CacheContents::default();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(contents),
        Err(e) => return Err(e.into()),
    };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match serde_json::from_str::<CacheRecord>(line) {
            Ok(rec) => contents.records.push(rec),
            Err(_) => contents.corrupt_lines += 1,
        }
    }
    Ok(contents)
}

/// Outcome counters for an upsert.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct UpsertStats {
    pub inserted: usize,
    pub replaced: usize,
    pub kept_existing: usize,
    pub corrupt_lines: usize,
}

/// Merge `new_records` into the file at `path`, keeping the tighter bounds
/// per key. Records with distinct keys (for example, different seeds) are
/// all retained. The write is atomic (temp file + rename) and the merge is
/// re-checked after the rename so a lost race keeps the better record.
pub fn upsert(path: &Path, new_records: &[CacheRecord]) -> Result<UpsertStats> {
    let mut stats = UpsertStats::default();
    for attempt in 0..3 {
        let existing = read_records(path)?;
        stats.corrupt_lines = existing.corrupt_lines;
        let mut merged = existing.records;
        stats.inserted = 0;
        stats.replaced = 0;
        stats.kept_existing = 0;
        for rec in new_records {
            match merged.iter_mut().find(|r| r.key() == rec.key()) {
                None => {
                    merged.push(rec.clone());
                    stats.inserted += 1;
                }
                Some(slot) => {
                    if rec.at_least_as_tight(slot) && rec != slot {
                        *slot = rec.clone();
                        stats.replaced += 1;
                    } else if !slot.at_least_as_tight(rec) {
                        // Mixed tightness: keep the pointwise-best bounds,
                        // and the witness of whichever supplied the lower.
                        if rec.lower > slot.lower {
                            slot.witness_hash = rec.witness_hash.clone();
                        }
                        slot.lower = slot.lower.max(rec.lower);
                        slot.upper = slot.upper.min(rec.upper);
                        slot.certified = slot.certified && rec.certified;
                        stats.replaced += 1;
                    } else {
                        stats.kept_existing += 1;
                    }
                }
            }
        }
        write_atomic(path, &merged)?;

        // Lost-race check: if our records are no longer at least as tight as
        // what's on disk, another writer interleaved; re-merge.
        let after = read_records(path)?;
        let ok = new_records.iter().all(|rec| {
            after
                .records
                .iter()
                .any(|r| r.key() == rec.key() && r.lower >= rec.lower && r.upper <= rec.upper)
        });
        if ok || attempt == 2 {
            break;
        }
    }
    Ok(stats)
}

fn write_atomic(path: &Path, records: &[CacheRecord]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut file = fs::File::create(&tmp)?;
    for rec in records {
        let line =
            serde_json::to_string(rec).map_err(|e| crate::Error::CacheFormat(e.to_string()))?;
        writeln!(file, "{line}")?;
    }
    file.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Exact-key lookup (used for reproducible table builds).
pub fn lookup(records: &[CacheRecord], key: &CacheKey) -> Option<CacheRecord> {
    records.iter().find(|r| r.key() == *key).cloned()
}

/// Tightest merge across all records matching `(m, n, q, d, p)` regardless
/// of budget and seed.
pub fn best_bounds(
    records: &[CacheRecord],
    m: u32,
    n: usize,
    q: Exponent,
    d: usize,
    p: Exponent,
) -> Option<(f64, f64, bool)> {
    let matching: Vec<&CacheRecord> = records
        .iter()
        .filter(|r| r.m == m && r.n == n && r.q == q && r.d == d && r.p == p)
        .collect();
    if matching.is_empty() {
        return None;
    }
    let lower = matching.iter().map(|r| r.lower).fold(f64::MIN, f64::max);
    let upper = matching.iter().map(|r| r.upper).fold(f64::MAX, f64::min);
    let certified = matching
        .iter()
        .filter(|r| r.lower == lower)
        .any(|r| r.certified);
    Some((lower, upper, certified))
}
