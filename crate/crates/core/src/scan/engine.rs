//! Incremental secant ranks for any variety that can produce tangent blocks
//! at random points.
//!
//! Each trial owns a point stream. Asking for the rank at `s` extends the
//! trial's stacked matrix with tangent blocks until it holds `s` points, so a
//! sweep over increasing `s` costs about as much as the largest cell alone.
//! Because point `h` of a stream depends only on the stream seed and `h`, the
//! result for a given `s` is the same as building the `s`-point matrix from
//! scratch.

use crate::error::{Error, Result};
use crate::field::{PrimeField, RealField};
use crate::matrix::Matrix;
use crate::rank::{rank_float, BackendMode, EchelonBasis, RankBackendConfig, RankResult, TrialSpec};
use crate::terracini::{RandomPointSource, SampleField};

/// A projective variety whose secant dimensions can be probed with
/// Terracini's lemma.
pub trait SecantModel: Send + Sync {
    /// Projective dimension `N` of the ambient space.
    fn ambient_dim(&self) -> usize;

    /// Dimension of the variety itself.
    fn variety_dim(&self) -> usize;

    /// Tangent block (rows spanning the affine cone over the tangent space)
    /// at the next random point of `src`.
    fn next_block<F: SampleField>(&self, src: &mut RandomPointSource<F>) -> Result<Matrix<F::Elem>>;

    /// `min{N, s * dim + s - 1}`.
    fn expected_dim(&self, s: usize) -> usize {
        self.ambient_dim().min((s * (self.variety_dim() + 1)).saturating_sub(1))
    }

    /// Least `s` whose expected dimension fills the ambient space.
    fn saturation(&self) -> usize {
        (self.ambient_dim() + 1).div_ceil(self.variety_dim() + 1)
    }
}

enum TrialState {
    Exact { src: RandomPointSource<PrimeField>, basis: EchelonBasis, points: usize },
    Float { src: RandomPointSource<RealField>, rows: Matrix<f64>, points: usize },
}

impl TrialState {
    fn new(spec: &TrialSpec, cfg: &RankBackendConfig, cols: usize) -> Result<Self> {
        Ok(match cfg.mode {
            BackendMode::ExactPrime => {
                let field = PrimeField::new(spec.prime)?;
                TrialState::Exact {
                    src: RandomPointSource::new(field, spec.seed),
                    basis: EchelonBasis::new(field, cols),
                    points: 0,
                }
            }
            BackendMode::FloatSvd => TrialState::Float {
                src: RandomPointSource::new(RealField, spec.seed).with_bound(cfg.float_bound),
                rows: Matrix::zeros(0, cols),
                points: 0,
            },
        })
    }

    fn points(&self) -> usize {
        match self {
            TrialState::Exact { points, .. } | TrialState::Float { points, .. } => *points,
        }
    }
}

/// Secant ranks of one model under one backend configuration.
pub struct SecantRanker<'a, M> {
    model: &'a M,
    cfg: RankBackendConfig,
    trials: Vec<Option<TrialState>>,
}

impl<'a, M: SecantModel> SecantRanker<'a, M> {
    pub fn new(model: &'a M, cfg: &RankBackendConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { model, cfg: cfg.clone(), trials: (0..cfg.trials).map(|_| None).collect() })
    }

    pub fn config(&self) -> &RankBackendConfig {
        &self.cfg
    }

    /// Rank of the `s`-point Terracini matrix in trial `t`.
    pub fn trial_rank(&mut self, t: usize, s: usize) -> Result<usize> {
        let cols = self.model.ambient_dim() + 1;
        let stale = self.trials[t].as_ref().is_none_or(|st| st.points() > s);
        if stale {
            self.trials[t] = Some(TrialState::new(&self.cfg.trial(t), &self.cfg, cols)?);
        }
        let state = self.trials[t].as_mut().expect("trial state initialised");
        match state {
            TrialState::Exact { src, basis, points } => {
                while *points < s {
                    if !basis.is_full() {
                        let block = self.model.next_block(src)?;
                        basis.push_rows(block.as_slice());
                    }
                    *points += 1;
                }
                Ok(basis.rank())
            }
            TrialState::Float { src, rows, points } => {
                while *points < s {
                    rows.vstack(&self.model.next_block(src)?)?;
                    *points += 1;
                }
                rank_float(rows, self.cfg.tolerance)
            }
        }
    }

    /// Runs the trial policy at `s`: the largest rank over the trials, with
    /// exact mode stopping at the first trial that reaches the expected
    /// cone dimension.
    pub fn rank(&mut self, s: usize) -> Result<RankResult> {
        if s == 0 {
            return Err(Error::Empty("secant order s must be at least 1".into()));
        }
        let bound = self.model.expected_dim(s) + 1;
        let mut ranks = Vec::with_capacity(self.cfg.trials);
        for t in 0..self.cfg.trials {
            let r = self.trial_rank(t, s)?;
            ranks.push(r);
            if self.cfg.mode == BackendMode::ExactPrime && r >= bound {
                break;
            }
        }
        Ok(RankResult::from_trials(ranks, &self.cfg))
    }
}
