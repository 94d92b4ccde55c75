//! Matrix rank under two backends and the trial policy that turns per-trial
//! ranks into a dimension claim.
//!
//! In exact mode the matrix is a specialisation (random integers mod p) of a
//! matrix whose entries are polynomials in the point coordinates. Its rank
//! can only be lower than the generic rank, so reaching the theoretical upper
//! bound proves the generic rank. Falling short is evidence, not proof.

mod exact;
mod float;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use exact::{rank_exact, rank_exact_reference, EchelonBasis};
pub use float::{rank_float, singular_values};

use crate::error::{Error, Result};
use crate::field::{is_prime, PrimeField};
use crate::matrix::Matrix;
use crate::terracini::{derive_seed, DEFAULT_FLOAT_BOUND};

/// Default modulus, `2^31 - 1`.
pub const DEFAULT_PRIME: u32 = 2_147_483_647;

/// Primes in `[2^30, 2^31)` cycled through by `vary_prime`, starting after
/// the configured prime.
pub const ALTERNATE_PRIMES: [u32; 4] = [2_147_483_629, 2_147_483_587, 1_073_741_827, 1_073_741_831];

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_EXACT_TRIALS: usize = 2;
pub const DEFAULT_FLOAT_TRIALS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BackendMode {
    #[serde(rename = "exact")]
    ExactPrime,
    #[serde(rename = "float")]
    FloatSvd,
}

impl BackendMode {
    /// Short identifier used in files and on the command line.
    pub fn id(self) -> &'static str {
        match self {
            BackendMode::ExactPrime => "exact",
            BackendMode::FloatSvd => "float",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        match id {
            "exact" | "exact_prime" => Some(BackendMode::ExactPrime),
            "float" | "float_svd" => Some(BackendMode::FloatSvd),
            _ => None,
        }
    }
}

impl fmt::Display for BackendMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankBackendConfig {
    pub mode: BackendMode,
    /// Modulus for exact mode, a prime in `[2^30, 2^31)`.
    pub prime: u32,
    /// Relative singular-value threshold for float mode.
    pub tolerance: f64,
    /// Half-width of the sampling interval for float mode.
    pub float_bound: f64,
    pub trials: usize,
    pub seed: u64,
    /// Use a different prime for each trial.
    pub vary_prime: bool,
}

impl RankBackendConfig {
    pub fn exact(seed: u64) -> Self {
        Self {
            mode: BackendMode::ExactPrime,
            prime: DEFAULT_PRIME,
            tolerance: DEFAULT_TOLERANCE,
            float_bound: DEFAULT_FLOAT_BOUND,
            trials: DEFAULT_EXACT_TRIALS,
            seed,
            vary_prime: false,
        }
    }

    pub fn float(seed: u64) -> Self {
        Self { mode: BackendMode::FloatSvd, trials: DEFAULT_FLOAT_TRIALS, ..Self::exact(seed) }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_prime(mut self, prime: u32) -> Self {
        self.prime = prime;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        match self.mode {
            BackendMode::ExactPrime => {
                if !(1 << 30..1 << 31).contains(&self.prime) || !is_prime(self.prime as u64) {
                    return Err(Error::InvalidConfig(format!("prime {} is not a prime in [2^30, 2^31)", self.prime)));
                }
            }
            BackendMode::FloatSvd => {
                if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
                    return Err(Error::InvalidConfig(format!("tolerance {} must be positive", self.tolerance)));
                }
                if !(self.float_bound > 0.0 && self.float_bound.is_finite()) {
                    return Err(Error::InvalidConfig(format!("bound {} must be positive", self.float_bound)));
                }
            }
        }
        Ok(())
    }

    /// Modulus used by trial `t`.
    pub fn prime_for_trial(&self, t: usize) -> u32 {
        if !self.vary_prime || t == 0 {
            return self.prime;
        }
        let alts: Vec<u32> = ALTERNATE_PRIMES.iter().copied().filter(|&q| q != self.prime).collect();
        alts[(t - 1) % alts.len()]
    }

    /// Seed of the point stream used by trial `t`.
    pub fn seed_for_trial(&self, t: usize) -> u64 {
        derive_seed(self.seed, &[t as u64])
    }

    /// Everything a single trial needs.
    pub fn trial(&self, t: usize) -> TrialSpec {
        TrialSpec { index: t, seed: self.seed_for_trial(t), prime: self.prime_for_trial(t) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialSpec {
    pub index: usize,
    pub seed: u64,
    pub prime: u32,
}

/// A matrix produced for one trial.
#[derive(Clone, Debug)]
pub enum BackendMatrix {
    Exact { field: PrimeField, matrix: Matrix<u32> },
    Float(Matrix<f64>),
}

impl BackendMatrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            BackendMatrix::Exact { matrix, .. } => (matrix.rows(), matrix.cols()),
            BackendMatrix::Float(m) => (m.rows(), m.cols()),
        }
    }

    pub fn rank(&self, tolerance: f64) -> Result<usize> {
        match self {
            BackendMatrix::Exact { field, matrix } => Ok(rank_exact(field, matrix)),
            BackendMatrix::Float(m) => rank_float(m, tolerance),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    pub per_trial_ranks: Vec<usize>,
    pub backend: RankBackendConfig,
    /// Whether `rank` is a proven lower bound for the generic rank.
    pub certified_lower_bound: bool,
}

impl RankResult {
    pub fn from_trials(per_trial_ranks: Vec<usize>, backend: &RankBackendConfig) -> Self {
        Self {
            rank: per_trial_ranks.iter().copied().max().unwrap_or(0),
            certified_lower_bound: backend.mode == BackendMode::ExactPrime,
            per_trial_ranks,
            backend: backend.clone(),
        }
    }

    pub fn trials_used(&self) -> usize {
        self.per_trial_ranks.len()
    }
}

/// Runs up to `cfg.trials` builds and keeps the largest rank.
///
/// In exact mode the trials stop early once `upper_bound` is reached, since
/// no further trial can exceed it.
pub fn certified_rank<B>(mut build: B, cfg: &RankBackendConfig, upper_bound: Option<usize>) -> Result<RankResult>
where
    B: FnMut(&TrialSpec) -> Result<BackendMatrix>,
{
    cfg.validate()?;
    let mut ranks = Vec::with_capacity(cfg.trials);
    let mut shape = None;
    for t in 0..cfg.trials {
        let m = build(&cfg.trial(t))?;
        match shape {
            None => shape = Some(m.shape()),
            Some(s) if s != m.shape() => {
                return Err(Error::Shape(format!("trial {t} built {:?}, earlier trials {:?}", m.shape(), s)));
            }
            Some(_) => {}
        }
        let r = m.rank(cfg.tolerance)?;
        ranks.push(r);
        if cfg.mode == BackendMode::ExactPrime && upper_bound.is_some_and(|b| r >= b) {
            break;
        }
    }
    Ok(RankResult::from_trials(ranks, cfg))
}
