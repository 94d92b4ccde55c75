//! Published secant dimensions for `n <= 14`, shipped as a text asset with a
//! checksum, and the check that recomputes them.

use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rank::RankBackendConfig;
use crate::scan::{ambient_dim, expected_dim, GrassmannClassifier, ScanPlan};

/// The transcribed tables.
pub const EMBEDDED: &str = include_str!("../data/golden_tables.txt");

/// SHA-256 of [`EMBEDDED`], as recorded at transcription time.
pub const EMBEDDED_SHA256: &str = include_str!("../data/golden_tables.sha256");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoldenCell {
    pub s: usize,
    pub dim: usize,
    /// Marked defective in the source.
    pub starred: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub k: usize,
    pub n: usize,
    /// `N` as printed.
    pub ambient: usize,
    /// `S` as printed.
    pub saturation: usize,
    /// Entries for `s = 2, 3, ...`.
    pub cells: Vec<GoldenCell>,
}

#[derive(Clone, Debug)]
pub struct GoldenData {
    rows: Vec<GoldenRow>,
    checksum: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl GoldenData {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("golden line {}: {what}", lineno + 1));
            let (head, tail) = line.split_once(':').ok_or_else(|| bad("missing ':'"))?;
            let head: Vec<usize> = head
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(&format!("bad number {t:?}"))))
                .collect::<Result<_>>()?;
            let [k, n, ambient, saturation] = head[..] else {
                return Err(bad("expected `k n N S`"));
            };
            let cells = tail
                .split_whitespace()
                .enumerate()
                .map(|(i, t)| {
                    let starred = t.ends_with('*');
                    let dim = t.trim_end_matches('*').parse().map_err(|_| bad(&format!("bad entry {t:?}")))?;
                    Ok(GoldenCell { s: i + 2, dim, starred })
                })
                .collect::<Result<Vec<_>>>()?;
            if cells.is_empty() {
                return Err(bad("no entries"));
            }
            rows.push(GoldenRow { k, n, ambient, saturation, cells });
        }
        Ok(Self { rows, checksum: sha256_hex(text.as_bytes()) })
    }

    /// The shipped tables, after checking them against the recorded checksum.
    pub fn embedded() -> Result<Self> {
        Self::parse_checked(EMBEDDED, EMBEDDED_SHA256)
    }

    /// Parses `text`, requiring its SHA-256 to equal the hex digest at the
    /// start of `sha_line`.
    pub fn parse_checked(text: &str, sha_line: &str) -> Result<Self> {
        let want = sha_line.split_whitespace().next().unwrap_or("").to_ascii_lowercase();
        let data = Self::parse(text)?;
        if data.checksum != want {
            return Err(Error::Parse(format!("golden checksum {} does not match recorded {want}", data.checksum)));
        }
        Ok(data)
    }

    /// Reads a table file; a sibling `<file>.sha256`, if present, is enforced.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut sha = path.as_os_str().to_owned();
        sha.push(".sha256");
        match std::fs::read_to_string(&sha) {
            Ok(line) => Self::parse_checked(&text, &line),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Self::parse(&text),
            Err(e) => Err(e.into()),
        }
    }

    pub fn rows(&self) -> &[GoldenRow] {
        &self.rows
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn row(&self, k: usize, n: usize) -> Option<&GoldenRow> {
        self.rows.iter().find(|r| (r.k, r.n) == (k, n))
    }

    /// Internal consistency: `N` matches, dims never exceed the expected
    /// value, starred entries fall short of it and unstarred ones reach it.
    /// `S` is not checked since the source has a misprint.
    pub fn audit(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for r in &self.rows {
            if r.k == 0 || r.k >= r.n {
                problems.push(format!("row (k={}, n={}) is out of range", r.k, r.n));
                continue;
            }
            if ambient_dim(r.k, r.n) != r.ambient {
                problems.push(format!(
                    "row (k={}, n={}): N = {} should be {}",
                    r.k,
                    r.n,
                    r.ambient,
                    ambient_dim(r.k, r.n)
                ));
            }
            for c in &r.cells {
                let e = expected_dim(r.k, r.n, c.s);
                if c.dim > e || c.starred != (c.dim < e) {
                    problems.push(format!(
                        "cell (k={}, n={}, s={}): {}{} against expected {e}",
                        r.k,
                        r.n,
                        c.s,
                        c.dim,
                        if c.starred { "*" } else { "" }
                    ));
                }
            }
        }
        problems
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub expected: usize,
    pub got: usize,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, n={}, s={}): expected {}, got {}", self.k, self.n, self.s, self.expected, self.got)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recomputes every golden cell whose `(k, n, s)` lies within `plan`.
///
/// Dimensions are compared directly, so a disagreement is reported as a
/// mismatch rather than raised as an oracle contradiction.
pub fn verify(data: &GoldenData, plan: &ScanPlan, cfg: &RankBackendConfig) -> Result<VerifyReport> {
    plan.validate()?;
    cfg.validate()?;
    let mut report = VerifyReport::default();
    for row in data.rows() {
        let in_budget = (plan.n_min..=plan.n_max).contains(&row.n)
            && plan.k_only.is_none_or(|k| k == row.k)
            && plan.k_max.is_none_or(|k| row.k <= k);
        if !in_budget {
            continue;
        }
        let classifier = GrassmannClassifier::new(row.k, row.n, cfg)?;
        let mut ranker = classifier.ranker()?;
        for c in &row.cells {
            if plan.s_max.is_some_and(|m| c.s > m) {
                break;
            }
            let got = ranker.rank(c.s)?.rank.saturating_sub(1);
            report.checked += 1;
            if got != c.dim {
                report.mismatches.push(Mismatch { k: row.k, n: row.n, s: c.s, expected: c.dim, got });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_checksum_and_audit() {
        let g = GoldenData::embedded().unwrap();
        assert_eq!(g.rows().len(), 41);
        assert!(g.audit().is_empty(), "{:?}", g.audit());
        let r = g.row(3, 7).unwrap();
        let dims: Vec<(usize, bool)> = r.cells.iter().map(|c| (c.dim, c.starred)).collect();
        assert_eq!(dims, vec![(33, false), (49, true), (63, true), (69, false)]);
        assert_eq!(g.row(5, 14).unwrap().cells.last().unwrap(), &GoldenCell { s: 91, dim: 5004, starred: false });
    }

    #[test]
    fn tampering_breaks_the_checksum() {
        let tampered = EMBEDDED.replace("2 6 34 3 : 25 33* 34", "2 6 34 3 : 25 32* 34");
        assert!(GoldenData::parse_checked(&tampered, EMBEDDED_SHA256).is_err());
        assert!(GoldenData::parse(&tampered).is_ok());
    }

    #[test]
    fn audit_flags_inconsistent_rows() {
        let g = GoldenData::parse("2 6 34 3 : 25 33 34\n1 4 10 2 : 9\n").unwrap();
        let problems = g.audit();
        assert_eq!(problems.len(), 2, "{problems:?}");
    }

    #[test]
    fn malformed_lines() {
        assert!(GoldenData::parse("1 4 9 : 9").is_err());
        assert!(GoldenData::parse("1 4 9 2 9").is_err());
        assert!(GoldenData::parse("1 4 9 2 : x").is_err());
        assert!(GoldenData::parse("1 4 9 2 :").is_err());
    }

    #[test]
    fn verify_small_block_and_detect_mismatch() {
        let plan = ScanPlan { n_max: 7, ..ScanPlan::default() };
        let cfg = RankBackendConfig::exact(11);
        let rep = verify(&GoldenData::embedded().unwrap(), &plan, &cfg).unwrap();
        assert!(rep.passed(), "{:?}", rep.mismatches);
        assert_eq!(rep.checked, 1 + 1 + 2 + 1 + 2 + 3 + 3 + 3 + 4);

        let bad = GoldenData::parse("2 6 34 3 : 25 32* 34\n").unwrap();
        let rep = verify(&bad, &plan, &cfg).unwrap();
        assert_eq!(rep.mismatches, vec![Mismatch { k: 2, n: 6, s: 3, expected: 32, got: 33 }]);
    }
}
