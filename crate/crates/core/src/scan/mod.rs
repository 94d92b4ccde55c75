//! The `(n, k, s)` sweep over secant varieties of Grassmannians.

mod cache;
mod engine;
mod registry;

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cache::{CacheKey, CellCache, CACHE_DIR_ENV};
pub use engine::{SecantModel, SecantRanker};
pub use registry::{lines_oracle, DefectRegistry, Expectation, SPORADIC_DEFECTIVE};

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::plucker::TangentPlan;
use crate::rank::{BackendMode, RankBackendConfig, RankResult};
use crate::terracini::{tangent_block, RandomPointSource, SampleField};

/// Projective dimension `N = C(n+1, k+1) - 1` of Plücker space.
pub fn ambient_dim(k: usize, n: usize) -> usize {
    binomial(n as u64 + 1, k as u64 + 1) as usize - 1
}

/// `dim G(k, n) = (k+1)(n-k)`.
pub fn grassmannian_dim(k: usize, n: usize) -> usize {
    (k + 1) * (n - k)
}

/// `min{N, s(n-k)(k+1) + s - 1}`.
pub fn expected_dim(k: usize, n: usize, s: usize) -> usize {
    ambient_dim(k, n).min((s * (grassmannian_dim(k, n) + 1)).saturating_sub(1))
}

/// `S = ceil((N+1) / ((k+1)(n-k) + 1))`.
pub fn saturation_s(k: usize, n: usize) -> usize {
    (ambient_dim(k, n) + 1).div_ceil(grassmannian_dim(k, n) + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    /// Exact rank reached the expected dimension: proven non-defective.
    CertifiedNondefective,
    /// Float rank reached the expected dimension.
    ProbableNondefective,
    /// Rank fell short in every trial and no known result explains it.
    CandidateDefective,
    /// Rank fell short by exactly the defect a known result predicts.
    OracleConfirmedDefective,
}

impl CellStatus {
    pub fn id(self) -> &'static str {
        match self {
            CellStatus::CertifiedNondefective => "certified_nondefective",
            CellStatus::ProbableNondefective => "probable_nondefective",
            CellStatus::CandidateDefective => "candidate_defective",
            CellStatus::OracleConfirmedDefective => "oracle_confirmed_defective",
        }
    }

    pub fn is_defective(self) -> bool {
        matches!(self, CellStatus::CandidateDefective | CellStatus::OracleConfirmedDefective)
    }
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CellStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            CellStatus::CertifiedNondefective,
            CellStatus::ProbableNondefective,
            CellStatus::CandidateDefective,
            CellStatus::OracleConfirmedDefective,
        ]
        .into_iter()
        .find(|c| c.id() == s)
        .ok_or_else(|| Error::Parse(format!("unknown status {s:?}")))
    }
}

/// One classified cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    #[serde(rename = "N")]
    pub ambient: usize,
    #[serde(rename = "S")]
    pub saturation: usize,
    pub expected_dim: usize,
    pub computed_dim: usize,
    pub defect: usize,
    pub status: CellStatus,
    pub backend: BackendMode,
    /// Modulus of the first trial, absent in float mode.
    pub prime: Option<u32>,
    pub seed: u64,
    /// Trials actually run.
    pub trials: usize,
}

/// What a model's theory predicts for a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    /// The defect is known (0 for non-defective).
    Defect(usize),
    Unknown,
}

/// Cell coordinates and model numbers feeding [`build_record`].
#[derive(Clone, Copy, Debug)]
pub struct CellShape {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub ambient: usize,
    pub saturation: usize,
    pub expected: usize,
}

/// Turns a rank result into a record, enforcing the upper bound and, in
/// exact mode, agreement with the oracle.
pub fn build_record(shape: CellShape, rank: &RankResult, oracle: Oracle) -> Result<ScanRecord> {
    let CellShape { k, n, s, ambient, saturation, expected } = shape;
    let contradiction = |detail: String| Error::RegistryContradiction { k, n, s, detail };
    let computed = rank.rank.checked_sub(1).ok_or_else(|| contradiction("Terracini matrix has rank 0".into()))?;
    if computed > expected {
        return Err(contradiction(format!("computed dimension {computed} exceeds the upper bound {expected}")));
    }
    let defect = expected - computed;
    let exact = rank.backend.mode == BackendMode::ExactPrime;
    let status = match oracle {
        Oracle::Defect(d) if exact && d != defect => {
            return Err(contradiction(format!(
                "known defect {d} but computed defect {defect} after {} trial(s) {:?}",
                rank.trials_used(),
                rank.per_trial_ranks
            )));
        }
        Oracle::Defect(d) if d == defect && d > 0 => CellStatus::OracleConfirmedDefective,
        _ if defect == 0 && exact => CellStatus::CertifiedNondefective,
        _ if defect == 0 => CellStatus::ProbableNondefective,
        _ => CellStatus::CandidateDefective,
    };
    Ok(ScanRecord {
        n,
        k,
        s,
        ambient,
        saturation,
        expected_dim: expected,
        computed_dim: computed,
        defect,
        status,
        backend: rank.backend.mode,
        prime: exact.then_some(rank.backend.prime),
        seed: rank.backend.seed,
        trials: rank.trials_used(),
    })
}

/// `G(k, n)` in its Plücker embedding.
pub struct GrassmannModel {
    plan: TangentPlan,
}

impl GrassmannModel {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidConfig(format!("G({k},{n}) needs 0 <= k < n")));
        }
        Ok(Self { plan: TangentPlan::new(n, k)? })
    }

    pub fn k(&self) -> usize {
        self.plan.k()
    }

    pub fn n(&self) -> usize {
        self.plan.n()
    }

    pub fn plan(&self) -> &TangentPlan {
        &self.plan
    }

    pub fn oracle(&self, s: usize) -> Oracle {
        let (k, n) = (self.k(), self.n());
        match DefectRegistry::expectation(k, n, s) {
            Expectation::Sporadic { defect } => Oracle::Defect(defect),
            Expectation::Lines { dim } => Oracle::Defect(expected_dim(k, n, s) - dim),
            Expectation::Cgg | Expectation::ProjectiveSpace => Oracle::Defect(0),
            Expectation::Unknown => Oracle::Unknown,
        }
    }

    pub fn shape(&self, s: usize) -> CellShape {
        let (k, n) = (self.k(), self.n());
        CellShape {
            k,
            n,
            s,
            ambient: ambient_dim(k, n),
            saturation: saturation_s(k, n),
            expected: expected_dim(k, n, s),
        }
    }
}

impl SecantModel for GrassmannModel {
    fn ambient_dim(&self) -> usize {
        ambient_dim(self.k(), self.n())
    }

    fn variety_dim(&self) -> usize {
        grassmannian_dim(self.k(), self.n())
    }

    fn next_block<F: SampleField>(&self, src: &mut RandomPointSource<F>) -> Result<Matrix<F::Elem>> {
        let point = src.next_point(&self.plan)?;
        tangent_block(src.field(), &point, &self.plan)
    }
}

/// Classifies cells of one `G(k, n)`, reusing work across increasing `s`.
pub struct GrassmannClassifier {
    model: GrassmannModel,
    cfg: RankBackendConfig,
}

impl GrassmannClassifier {
    pub fn new(k: usize, n: usize, cfg: &RankBackendConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { model: GrassmannModel::new(k, n)?, cfg: cfg.clone() })
    }

    pub fn model(&self) -> &GrassmannModel {
        &self.model
    }

    pub fn ranker(&self) -> Result<SecantRanker<'_, GrassmannModel>> {
        SecantRanker::new(&self.model, &self.cfg)
    }
}

/// Classifies one cell, returning the record and the per-trial evidence.
pub fn classify_cell_detailed(
    k: usize,
    n: usize,
    s: usize,
    cfg: &RankBackendConfig,
) -> Result<(ScanRecord, RankResult)> {
    let c = GrassmannClassifier::new(k, n, cfg)?;
    let rank = c.ranker()?.rank(s)?;
    let record = build_record(c.model.shape(s), &rank, c.model.oracle(s))?;
    Ok((record, rank))
}

pub fn classify_cell(k: usize, n: usize, s: usize, cfg: &RankBackendConfig) -> Result<ScanRecord> {
    classify_cell_detailed(k, n, s, cfg).map(|(r, _)| r)
}

/// What to sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanPlan {
    pub n_min: usize,
    pub n_max: usize,
    /// Upper bound on `k`; replaces the default cap when set.
    pub k_max: Option<usize>,
    /// Restrict to a single `k`.
    pub k_only: Option<usize>,
    /// Hard upper bound on `s`.
    pub s_max: Option<usize>,
    /// Continue past `S` while a defective cell has not filled the space.
    pub continue_past_s: bool,
    /// Allow `k > (n-1)/2` (dual Grassmannians).
    pub lift_k_cap: bool,
    pub jobs: usize,
    /// Recompute cells present in the cache.
    pub force: bool,
}

impl Default for ScanPlan {
    fn default() -> Self {
        Self {
            n_min: 3,
            n_max: 14,
            k_max: None,
            k_only: None,
            s_max: None,
            continue_past_s: true,
            lift_k_cap: false,
            jobs: 1,
            force: false,
        }
    }
}

impl ScanPlan {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 3 {
            return Err(Error::InvalidConfig(format!("n_min = {} must be at least 3", self.n_min)));
        }
        if self.n_max < self.n_min {
            return Err(Error::InvalidConfig(format!("n_max = {} is below n_min = {}", self.n_max, self.n_min)));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidConfig("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// The `k` values scanned for a given `n`.
    pub fn k_range(&self, n: usize) -> Vec<usize> {
        if let Some(k) = self.k_only {
            return if k >= 1 && k < n { vec![k] } else { vec![] };
        }
        let natural = if self.lift_k_cap { n - 1 } else { (n - 1) / 2 };
        let cap = match self.k_max {
            Some(m) => natural.min(m),
            None if n == 14 && !self.lift_k_cap => natural.min(5),
            None => natural,
        };
        (1..=cap).collect()
    }

    /// `(k, n)` pairs in canonical output order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (self.n_min..=self.n_max).flat_map(|n| self.k_range(n).into_iter().map(move |k| (k, n))).collect()
    }

    /// Largest `s` to try for `(k, n)` once continuation is taken into account.
    fn s_limit(&self, saturation: usize) -> usize {
        let natural = if self.continue_past_s { 3 * saturation } else { saturation };
        self.s_max.map_or(natural, |m| natural.min(m))
    }
}

/// Scans one `(k, n)` row. Cached cells are reused unless the plan forces
/// recomputation; fresh records are returned alongside the row.
fn scan_pair(
    k: usize,
    n: usize,
    plan: &ScanPlan,
    cfg: &RankBackendConfig,
    cache: Option<&CellCache>,
) -> (Vec<ScanRecord>, Vec<ScanRecord>, Option<Error>) {
    let mut rows = Vec::new();
    let mut fresh = Vec::new();
    let classifier = match GrassmannClassifier::new(k, n, cfg) {
        Ok(c) => c,
        Err(e) => return (rows, fresh, Some(e)),
    };
    let mut ranker = match classifier.ranker() {
        Ok(r) => r,
        Err(e) => return (rows, fresh, Some(e)),
    };
    let model = classifier.model();
    let saturation = saturation_s(k, n);
    let limit = plan.s_limit(saturation);
    let mut s = 2;
    while s <= limit {
        let cached = if plan.force { None } else { cache.and_then(|c| c.get(&CacheKey::new(k, n, s, cfg))) };
        let record = match cached {
            Some(r) => r.clone(),
            None => {
                let res = ranker.rank(s).and_then(|rank| build_record(model.shape(s), &rank, model.oracle(s)));
                match res {
                    Ok(r) => {
                        fresh.push(r.clone());
                        r
                    }
                    Err(e) => return (rows, fresh, Some(e)),
                }
            }
        };
        let filled = record.computed_dim == record.ambient;
        rows.push(record);
        if s >= saturation && (filled || !plan.continue_past_s) {
            break;
        }
        s += 1;
    }
    (rows, fresh, None)
}

/// Result of a sweep; `records` holds everything finished before any error.
#[derive(Debug)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    pub error: Option<Error>,
}

/// Sweeps the plan's cells, in canonical `(n, k, s)` order.
pub fn scan_range_partial(plan: &ScanPlan, cfg: &RankBackendConfig, cache: Option<&mut CellCache>) -> ScanOutcome {
    if let Err(e) = plan.validate().and_then(|_| cfg.validate()) {
        return ScanOutcome { records: vec![], error: Some(e) };
    }
    let pairs = plan.pairs();
    let cache_ro: Option<&CellCache> = cache.as_deref();
    let sink: Mutex<Vec<ScanRecord>> = Mutex::new(Vec::new());
    let run = |&(k, n): &(usize, usize)| {
        let (rows, fresh, err) = scan_pair(k, n, plan, cfg, cache_ro);
        sink.lock().expect("sink poisoned").extend(fresh);
        (rows, err)
    };
    let results: Vec<(Vec<ScanRecord>, Option<Error>)> = if plan.jobs > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(plan.jobs).build() {
            Ok(pool) => pool.install(|| pairs.par_iter().map(run).collect()),
            Err(e) => return ScanOutcome { records: vec![], error: Some(Error::InvalidConfig(e.to_string())) },
        }
    } else {
        pairs.iter().map(run).collect()
    };

    let mut records = Vec::new();
    let mut error = None;
    for (rows, err) in results {
        records.extend(rows);
        if error.is_none() {
            error = err;
        }
    }
    if let Some(cache) = cache {
        let mut fresh = sink.into_inner().expect("sink poisoned");
        fresh.sort_by_key(|r| (r.n, r.k, r.s));
        for r in fresh {
            if let Err(e) = cache.insert(r, cfg) {
                error.get_or_insert(e);
                break;
            }
        }
    }
    records.sort_by_key(|r| (r.n, r.k, r.s));
    ScanOutcome { records, error }
}

pub fn scan_range(plan: &ScanPlan, cfg: &RankBackendConfig, cache: Option<&mut CellCache>) -> Result<Vec<ScanRecord>> {
    let out = scan_range_partial(plan, cfg, cache);
    match out.error {
        Some(e) => Err(e),
        None => Ok(out.records),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> RankBackendConfig {
        RankBackendConfig::exact(7)
    }

    #[test]
    fn expected_dim_examples() {
        assert_eq!(expected_dim(2, 6, 3), 34);
        assert_eq!(expected_dim(3, 7, 4), 67);
        for (k, n) in [(1, 3), (2, 6), (5, 14)] {
            assert_eq!(expected_dim(k, n, 1), (k + 1) * (n - k));
        }
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(saturation_s(2, 6), 3);
        assert_eq!(saturation_s(5, 14), 91);
        // (N+1)/(dim+1) = 6/5
        assert_eq!(saturation_s(1, 3), 2);
    }

    #[test]
    fn classify_known_cells() {
        let r = classify_cell(2, 6, 3, &exact()).unwrap();
        assert_eq!((r.computed_dim, r.defect, r.status), (33, 1, CellStatus::OracleConfirmedDefective));
        let r = classify_cell(1, 5, 2, &exact()).unwrap();
        assert_eq!((r.computed_dim, r.defect), (13, 1));
        let r = classify_cell(4, 9, 9, &exact()).unwrap();
        assert_eq!((r.computed_dim, r.defect, r.status), (233, 0, CellStatus::CertifiedNondefective));
        assert_eq!(r.trials, 1);
        assert_eq!(r.prime, Some(crate::rank::DEFAULT_PRIME));
    }

    #[test]
    fn single_point_cell() {
        let r = classify_cell(1, 3, 1, &exact()).unwrap();
        assert_eq!(r.computed_dim, 4);
    }

    #[test]
    fn rows_match_published_values() {
        let plan = |k, n| ScanPlan { n_min: n, n_max: n, k_only: Some(k), ..ScanPlan::default() };
        let dims = |k, n| -> Vec<usize> {
            scan_range(&plan(k, n), &exact(), None).unwrap().iter().map(|r| r.computed_dim).collect()
        };
        assert_eq!(dims(2, 6), vec![25, 33, 34]);
        assert_eq!(dims(3, 7), vec![33, 49, 63, 69]);
        assert_eq!(dims(1, 4), vec![9]);
    }

    #[test]
    fn plan_k_ranges() {
        let p = ScanPlan::default();
        assert_eq!(p.k_range(14), vec![1, 2, 3, 4, 5]);
        assert_eq!(p.k_range(13), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(p.k_range(4), vec![1]);
        let lifted = ScanPlan { lift_k_cap: true, ..ScanPlan::default() };
        assert_eq!(lifted.k_range(5), vec![1, 2, 3, 4]);
        let capped = ScanPlan { k_max: Some(6), ..ScanPlan::default() };
        assert_eq!(capped.k_range(14), vec![1, 2, 3, 4, 5, 6]);
        assert!(ScanPlan { n_min: 2, ..ScanPlan::default() }.validate().is_err());
    }

    #[test]
    fn float_mode_statuses() {
        let cfg = RankBackendConfig::float(3);
        let r = classify_cell(2, 6, 2, &cfg).unwrap();
        assert_eq!((r.computed_dim, r.status, r.prime), (25, CellStatus::ProbableNondefective, None));
        let r = classify_cell(2, 6, 3, &cfg).unwrap();
        assert_eq!((r.computed_dim, r.status), (33, CellStatus::OracleConfirmedDefective));
    }

    #[test]
    fn exceeding_the_bound_is_a_contradiction() {
        let cfg = exact();
        let rank = RankResult::from_trials(vec![40], &cfg);
        let model = GrassmannModel::new(2, 6).unwrap();
        let err = build_record(model.shape(3), &rank, model.oracle(3)).unwrap_err();
        assert!(matches!(err, Error::RegistryContradiction { .. }));
        // a CGG cell reported as defective in exact mode
        let rank = RankResult::from_trials(vec![20], &cfg);
        let err = build_record(model.shape(2), &rank, model.oracle(2)).unwrap_err();
        assert!(matches!(err, Error::RegistryContradiction { s: 2, .. }));
    }
}
