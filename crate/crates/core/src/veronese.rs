//! Secant varieties of Veronese varieties, used to validate the Terracini
//! machinery against a complete classification.
//!
//! The tangent space to `V_{k,n+1}` at `[L^k]` is spanned by the forms
//! `L^{k-1} x_i`, `i = 0..=n`.

use std::collections::HashMap;

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::plucker::TangentPlan;
use crate::rank::RankBackendConfig;
use crate::scan::{build_record, CellShape, Oracle, ScanRecord, SecantModel, SecantRanker};
use crate::terracini::{RandomPointSource, SampleField};

/// Cells `(k, n, s)` where `V_{k,n+1}` is defective besides quadrics.
pub const AH_EXCEPTIONS: [(usize, usize, usize); 4] = [(4, 2, 5), (4, 3, 9), (4, 4, 14), (3, 4, 7)];

/// Exponent vectors of degree-`k` monomials in `n+1` variables, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    n_vars: usize,
    degree: usize,
    monomials: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl MonomialTable {
    pub fn new(n_vars: usize, degree: usize) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::InvalidConfig("at least one variable is required".into()));
        }
        if degree > u8::MAX as usize {
            return Err(Error::InvalidConfig(format!("degree {degree} too large")));
        }
        let mut monomials = Vec::new();
        let mut cur = vec![0u8; n_vars];
        fill(&mut cur, 0, degree, &mut monomials);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(Self { n_vars, degree, monomials, index })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &[u8] {
        &self.monomials[i]
    }

    pub fn index_of(&self, exps: &[u8]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

// Lexicographic: the first exponent varies slowest, smallest first.
fn fill(cur: &mut Vec<u8>, pos: usize, remaining: usize, out: &mut Vec<Vec<u8>>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining as u8;
        out.push(cur.clone());
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e as u8;
        fill(cur, pos + 1, remaining - e, out);
    }
}

/// `d! / prod(e_i!)`.
fn multinomial(exps: &[u8]) -> u128 {
    let mut total = 0u64;
    let mut acc = 1u128;
    for &e in exps {
        total += e as u64;
        acc *= binomial(total, e as u64) as u128;
    }
    acc
}

/// Rows `L^{k-1} x_i` for `i = 0..=n`, in the monomial basis of `table`.
pub fn veronese_tangent_block<F: Field>(field: &F, form: &[F::Elem], table: &MonomialTable) -> Result<Matrix<F::Elem>> {
    let n_vars = table.n_vars();
    if form.len() != n_vars {
        return Err(Error::Shape(format!("linear form has {} coefficients, expected {n_vars}", form.len())));
    }
    if form.iter().all(|&c| field.is_zero(c)) {
        return Err(Error::InvalidConfig("zero linear form".into()));
    }
    let k = table.degree();
    if k == 0 {
        return Err(Error::InvalidConfig("degree must be at least 1".into()));
    }
    let lower = MonomialTable::new(n_vars, k - 1)?;
    let mut block = Matrix::zeros(n_vars, table.len());
    let mut shifted = vec![0u8; n_vars];
    for beta in &lower.monomials {
        // coefficient of x^beta in L^{k-1}
        let m = multinomial(beta);
        let mut c = field.lift_i64(i64::try_from(m).map_err(|_| Error::InvalidConfig("degree too large".into()))?);
        for (&coef, &e) in form.iter().zip(beta) {
            for _ in 0..e {
                c = field.mul(c, coef);
            }
        }
        for i in 0..n_vars {
            shifted.copy_from_slice(beta);
            shifted[i] += 1;
            let col = table.index_of(&shifted).expect("degree-k monomial");
            block.set(i, col, c);
        }
    }
    Ok(block)
}

/// `V_{k, n+1}`: `P^n` under the degree-`k` Veronese embedding.
pub struct VeroneseModel {
    k: usize,
    n: usize,
    table: MonomialTable,
    form_plan: TangentPlan,
}

impl VeroneseModel {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidConfig(format!("V_{{{k},{}}} needs k >= 1 and n >= 1", n + 1)));
        }
        Ok(Self { k, n, table: MonomialTable::new(n + 1, k)?, form_plan: TangentPlan::new(n, 0)? })
    }

    pub fn table(&self) -> &MonomialTable {
        &self.table
    }

    /// Known defect of the `s`-secant variety.
    pub fn oracle(&self, s: usize) -> Oracle {
        let (k, n) = (self.k, self.n);
        if AH_EXCEPTIONS.contains(&(k, n, s)) {
            return Oracle::Defect(1);
        }
        if k == 2 && s <= n + 1 {
            // symmetric matrices of rank <= s
            let m = (n + 1) as u64;
            let dim = binomial(m + 1, 2) - binomial(m + 1 - s as u64, 2) - 1;
            return Oracle::Defect(self.expected_dim(s) - dim as usize);
        }
        Oracle::Unknown
    }

    pub fn shape(&self, s: usize) -> CellShape {
        CellShape {
            k: self.k,
            n: self.n,
            s,
            ambient: self.ambient_dim(),
            saturation: self.saturation(),
            expected: self.expected_dim(s),
        }
    }
}

impl SecantModel for VeroneseModel {
    fn ambient_dim(&self) -> usize {
        self.table.len() - 1
    }

    fn variety_dim(&self) -> usize {
        self.n
    }

    fn next_block<F: SampleField>(&self, src: &mut RandomPointSource<F>) -> Result<Matrix<F::Elem>> {
        let form = src.next_point(&self.form_plan)?;
        veronese_tangent_block(src.field(), form.row(0), &self.table)
    }
}

/// Whether `(k, n, s)` is defective according to the classification.
pub fn ah_defective(k: usize, n: usize, s: usize) -> bool {
    AH_EXCEPTIONS.contains(&(k, n, s)) || (k == 2 && (2..=n).contains(&s))
}

pub fn veronese_classify(k: usize, n: usize, s: usize, cfg: &RankBackendConfig) -> Result<ScanRecord> {
    let model = VeroneseModel::new(k, n)?;
    let rank = SecantRanker::new(&model, cfg)?.rank(s)?;
    build_record(model.shape(s), &rank, model.oracle(s))
}

/// All cells `2 <= s <= S` for `1 <= k <= k_max`, `1 <= n <= n_max`.
pub fn veronese_scan(k_max: usize, n_max: usize, cfg: &RankBackendConfig) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in 1..=k_max {
            let model = VeroneseModel::new(k, n)?;
            let mut ranker = SecantRanker::new(&model, cfg)?;
            for s in 2..=model.saturation() {
                let rank = ranker.rank(s)?;
                out.push(build_record(model.shape(s), &rank, model.oracle(s))?);
            }
        }
    }
    Ok(out)
}
