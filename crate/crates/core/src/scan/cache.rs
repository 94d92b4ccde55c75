//! Append-only cell cache: one `key=value` record per line.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::{CellStatus, ScanRecord};
use crate::error::{Error, Result};
use crate::rank::{BackendMode, RankBackendConfig};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "SECANT_CACHE_DIR";

/// File name used inside a cache directory.
pub const CACHE_FILE: &str = "cells.kv";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub backend: BackendMode,
    pub prime: Option<u32>,
    pub seed: u64,
}

impl CacheKey {
    pub fn new(k: usize, n: usize, s: usize, cfg: &RankBackendConfig) -> Self {
        Self {
            k,
            n,
            s,
            backend: cfg.mode,
            prime: (cfg.mode == BackendMode::ExactPrime).then_some(cfg.prime),
            seed: cfg.seed,
        }
    }

    fn of_record(r: &ScanRecord) -> Self {
        Self { k: r.k, n: r.n, s: r.s, backend: r.backend, prime: r.prime, seed: r.seed }
    }
}

pub struct CellCache {
    path: PathBuf,
    entries: HashMap<CacheKey, ScanRecord>,
}

impl CellCache {
    /// Opens (creating if needed) the cache file at `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut entries = HashMap::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                let r = parse_line(&line).map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1)))?;
                entries.insert(CacheKey::of_record(&r), r);
            }
        }
        Ok(Self { path, entries })
    }

    /// Cache file under the directory in [`CACHE_DIR_ENV`], if set.
    pub fn from_env() -> Option<PathBuf> {
        std::env::var_os(CACHE_DIR_ENV).map(|d| PathBuf::from(d).join(CACHE_FILE))
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

    pub fn get(&self, key: &CacheKey) -> Option<&ScanRecord> {
        self.entries.get(key)
    }

    /// Appends a record; a later line for the same key wins on reload.
    pub fn insert(&mut self, record: ScanRecord, cfg: &RankBackendConfig) -> Result<()> {
        debug_assert_eq!(CacheKey::of_record(&record), CacheKey::new(record.k, record.n, record.s, cfg));
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{}", format_line(&record))?;
        f.flush()?;
        self.entries.insert(CacheKey::of_record(&record), record);
        Ok(())
    }
}

fn format_line(r: &ScanRecord) -> String {
    let prime = r.prime.map_or_else(|| "-".to_string(), |p| p.to_string());
    format!(
        "k={} n={} s={} backend={} prime={} seed={} N={} S={} expected={} computed={} defect={} status={} trials={}",
        r.k,
        r.n,
        r.s,
        r.backend,
        prime,
        r.seed,
        r.ambient,
        r.saturation,
        r.expected_dim,
        r.computed_dim,
        r.defect,
        r.status,
        r.trials
    )
}

fn parse_line(line: &str) -> Result<ScanRecord> {
    let mut kv = HashMap::new();
    for tok in line.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("token {tok:?} is not key=value")))?;
        kv.insert(k, v);
    }
    let get = |key: &str| kv.get(key).copied().ok_or_else(|| Error::Parse(format!("missing key {key}")));
    let num = |key: &str| -> Result<u64> { get(key)?.parse::<u64>().map_err(|e| Error::Parse(format!("{key}: {e}"))) };
    let backend = get("backend")?;
    let prime = match get("prime")? {
        "-" => None,
        p => Some(p.parse::<u32>().map_err(|e| Error::Parse(format!("prime: {e}")))?),
    };
    Ok(ScanRecord {
        k: num("k")? as usize,
        n: num("n")? as usize,
        s: num("s")? as usize,
        ambient: num("N")? as usize,
        saturation: num("S")? as usize,
        expected_dim: num("expected")? as usize,
        computed_dim: num("computed")? as usize,
        defect: num("defect")? as usize,
        status: get("status")?.parse::<CellStatus>()?,
        backend: BackendMode::from_id(backend).ok_or_else(|| Error::Parse(format!("backend {backend:?}")))?,
        prime,
        seed: num("seed")?,
        trials: num("trials")? as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::{classify_cell, scan_range, ScanPlan};

    #[test]
    fn line_round_trip() {
        let r = classify_cell(2, 6, 3, &RankBackendConfig::exact(7)).unwrap();
        assert_eq!(parse_line(&format_line(&r)).unwrap(), r);
        let f = classify_cell(1, 4, 2, &RankBackendConfig::float(7)).unwrap();
        assert_eq!(parse_line(&format_line(&f)).unwrap(), f);
        assert!(parse_line("k=1 n=2").is_err());
    }

    #[test]
    fn rescans_reuse_cached_cells() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join(CACHE_FILE);
        let cfg = RankBackendConfig::exact(3);
        let plan = ScanPlan { n_min: 5, n_max: 6, ..ScanPlan::default() };
        let mut cache = CellCache::open(&path).unwrap();
        let first = scan_range(&plan, &cfg, Some(&mut cache)).unwrap();
        assert_eq!(cache.len(), first.len());

        // Doctor a cached value: a non-forced rerun must return it verbatim.
        let text = fs::read_to_string(&path).unwrap();
        let doctored = text.replace("k=2 n=6 s=2 backend=exact", "k=2 n=6 s=2 backend=exact marker=1");
        fs::write(&path, &doctored).unwrap();
        let mut cache = CellCache::open(&path).unwrap();
        let mut tweaked = cache.get(&CacheKey::new(2, 6, 2, &cfg)).unwrap().clone();
        tweaked.trials = 99;
        cache.insert(tweaked, &cfg).unwrap();
        let again = scan_range(&plan, &cfg, Some(&mut cache)).unwrap();
        assert_eq!(again.iter().find(|r| (r.k, r.n, r.s) == (2, 6, 2)).unwrap().trials, 99);

        let forced = ScanPlan { force: true, ..plan };
        let fresh = scan_range(&forced, &cfg, Some(&mut CellCache::open(&path).unwrap())).unwrap();
        assert_eq!(fresh, first);
    }
}
