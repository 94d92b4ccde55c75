//! Terracini matrices: stacked tangent blocks at random points of `G(k, n)`.
//!
//! The tangent space at `P = v_0 ∧ ... ∧ v_k` is the sum of the spaces
//! `v_0 ∧ ... ∧ V ∧ ... ∧ v_k` (with `V` in slot `i`). Slot `i` is spanned by
//! the Plücker vectors of the matrices `A_{i,j}`, so the tangent block of a
//! point is `(k+1)(n+1)` rows of maximal minors and the row span of the
//! stacked blocks is the affine cone over the span of the tangent spaces.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, RealField};
use crate::matrix::Matrix;
use crate::plucker::{PointMatrix, TangentPlan};

/// Default half-width `L` of the interval `[-L, L]` for floating entries.
pub const DEFAULT_FLOAT_BOUND: f64 = 100.0;

/// Consecutive rank-deficient redraws tolerated before giving up.
pub const MAX_RESAMPLES: usize = 8;

/// Fields that can produce uniformly random elements.
pub trait SampleField: Field {
    /// One random element. `bound` is the interval half-width for floating
    /// fields and is ignored by prime fields.
    fn sample(&self, rng: &mut ChaCha8Rng, bound: f64) -> Self::Elem;
}

impl SampleField for PrimeField {
    fn sample(&self, rng: &mut ChaCha8Rng, _bound: f64) -> u32 {
        rng.gen_range(0..self.modulus())
    }
}

impl SampleField for RealField {
    fn sample(&self, rng: &mut ChaCha8Rng, bound: f64) -> f64 {
        (rng.gen::<f64>() - 0.5) * 2.0 * bound
    }
}

/// splitmix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministically derives a child seed from a base seed and a path.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

/// A deterministic stream of random points.
///
/// Point `c` of the stream depends only on `(seed, c)`, so drawing `s + 1`
/// points extends the list drawn for `s`.
#[derive(Clone, Debug)]
pub struct RandomPointSource<F> {
    field: F,
    seed: u64,
    bound: f64,
    counter: u64,
}

impl<F: SampleField> RandomPointSource<F> {
    pub fn new(field: F, seed: u64) -> Self {
        Self { field, seed, bound: DEFAULT_FLOAT_BOUND, counter: 0 }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of the next point to be drawn.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Draws the next full-rank point, redrawing rank-deficient ones.
    pub fn next_point(&mut self, plan: &TangentPlan) -> Result<PointMatrix<F::Elem>> {
        let (k, n) = (plan.k(), plan.n());
        let index = self.counter;
        self.counter += 1;
        for attempt in 0..=MAX_RESAMPLES as u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, &[index, attempt]));
            let data = (0..(k + 1) * (n + 1)).map(|_| self.field.sample(&mut rng, self.bound)).collect();
            let point = PointMatrix::new(k, n, Matrix::from_vec(k + 1, n + 1, data)?)?;
            if !plan.embed(&self.field, &point).is_zero(&self.field) {
                return Ok(point);
            }
        }
        Err(Error::DegenerateSample(format!(
            "point {index} of G({k},{n}) was rank deficient after {MAX_RESAMPLES} resamples"
        )))
    }
}

/// Draws `s` points of `G(k, n)` from `src`.
pub fn sample_points<F: SampleField>(
    src: &mut RandomPointSource<F>,
    k: usize,
    n: usize,
    s: usize,
) -> Result<Vec<PointMatrix<F::Elem>>> {
    if s == 0 {
        return Err(Error::Empty("at least one point is required".into()));
    }
    let plan = TangentPlan::new(n, k)?;
    (0..s).map(|_| src.next_point(&plan)).collect()
}

/// The `(k+1)(n+1) x C(n+1, k+1)` stack of blocks `M_0, ..., M_k`.
pub fn tangent_block<F: Field>(field: &F, a: &PointMatrix<F::Elem>, plan: &TangentPlan) -> Result<Matrix<F::Elem>> {
    if a.k() != plan.k() || a.n() != plan.n() {
        return Err(Error::Shape(format!(
            "point of G({},{}) used with a plan for G({},{})",
            a.k(),
            a.n(),
            plan.k(),
            plan.n()
        )));
    }
    let (k, n) = (plan.k(), plan.n());
    let cols = plan.table().len();
    let block_len = (n + 1) * cols;
    let mut data = vec![field.zero(); (k + 1) * block_len];
    for (i, block) in data.chunks_mut(block_len).enumerate() {
        plan.fill_block(field, a, i, block);
    }
    Matrix::from_vec((k + 1) * (n + 1), cols, data)
}

/// Where a Terracini matrix came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub seed: u64,
    pub backend: String,
}

#[derive(Clone, Debug)]
pub struct TerraciniMatrix<T> {
    pub data: Matrix<T>,
    pub provenance: Provenance,
}

/// Stacks the tangent blocks of `points` vertically.
pub fn assemble<F: Field>(
    field: &F,
    points: &[PointMatrix<F::Elem>],
    plan: &TangentPlan,
    seed: u64,
    backend: &str,
) -> Result<TerraciniMatrix<F::Elem>> {
    let first = points.first().ok_or_else(|| Error::Empty("no points to assemble".into()))?;
    if let Some(bad) = points.iter().find(|p| p.k() != first.k() || p.n() != first.n()) {
        return Err(Error::Shape(format!(
            "mixed shapes: G({},{}) and G({},{})",
            first.k(),
            first.n(),
            bad.k(),
            bad.n()
        )));
    }
    let mut data = Matrix::zeros(0, plan.table().len());
    for p in points {
        data.vstack(&tangent_block(field, p, plan)?)?;
    }
    Ok(TerraciniMatrix {
        data,
        provenance: Provenance { k: plan.k(), n: plan.n(), s: points.len(), seed, backend: backend.to_string() },
    })
}

impl<T: Copy + Default> TerraciniMatrix<T> {
    /// One row per line, space separated, in the field's canonical form.
    pub fn write_dense<F: Field<Elem = T>, W: Write>(&self, field: &F, mut w: W) -> Result<()> {
        let pv = &self.provenance;
        writeln!(
            w,
            "# k={} n={} s={} seed={} backend={} rows={} cols={}",
            pv.k,
            pv.n,
            pv.s,
            pv.seed,
            pv.backend,
            self.data.rows(),
            self.data.cols()
        )?;
        for r in 0..self.data.rows() {
            let line: Vec<String> = self.data.row(r).iter().map(|&x| field.display(x)).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
