//! Plücker embedding: maximal minors of a `(k+1) x (n+1)` matrix.
//!
//! Two independent routes are provided. [`plucker_embed`] evaluates one
//! determinant per column subset by elimination. [`MinorPlan`] instead builds
//! all minors of the first `r` rows from those of the first `r - 1` rows by
//! Laplace expansion along row `r`, which is what the tangent-space code uses
//! together with the cofactor identity for row-substituted matrices.

use crate::combin::SubsetTable;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{determinant, Matrix};

/// A point `v_0 ∧ ... ∧ v_k` of `G(k, n)`, stored as the matrix with rows
/// `v_0, ..., v_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMatrix<T> {
    k: usize,
    n: usize,
    entries: Matrix<T>,
}

impl<T: Copy + Default> PointMatrix<T> {
    pub fn new(k: usize, n: usize, entries: Matrix<T>) -> Result<Self> {
        if entries.rows() != k + 1 || entries.cols() != n + 1 {
            return Err(Error::Shape(format!(
                "point of G({k},{n}) needs a {}x{} matrix, got {}x{}",
                k + 1,
                n + 1,
                entries.rows(),
                entries.cols()
            )));
        }
        Ok(Self { k, n, entries })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        if m.rows() == 0 || m.cols() < m.rows() {
            return Err(Error::Shape(format!("{}x{} is not a point matrix", m.rows(), m.cols())));
        }
        Self::new(m.rows() - 1, m.cols() - 1, m)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        self.entries.row(i)
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        self.entries.row_mut(i)
    }

    fn check_table(&self, table: &SubsetTable) -> Result<()> {
        if table.n_plus_1() != self.n + 1 || table.k_plus_1() != self.k + 1 {
            return Err(Error::Shape(format!(
                "subset table for ({}, {}) used with a point of G({},{})",
                table.k_plus_1() as isize - 1,
                table.n_plus_1() as isize - 1,
                self.k,
                self.n
            )));
        }
        Ok(())
    }
}

/// Plücker coordinates, indexed by [`SubsetTable`] ordinal.
#[derive(Clone, Debug, PartialEq)]
pub struct PluckerVector<T> {
    pub coords: Vec<T>,
}

impl<T> PluckerVector<T> {
    pub fn is_zero<F: Field<Elem = T>>(&self, field: &F) -> bool
    where
        T: Copy,
    {
        self.coords.iter().all(|&c| field.is_zero(c))
    }
}

/// All maximal minors, one elimination-based determinant per column subset.
pub fn plucker_embed<F: Field>(
    field: &F,
    a: &PointMatrix<F::Elem>,
    table: &SubsetTable,
) -> Result<PluckerVector<F::Elem>> {
    a.check_table(table)?;
    let mut cols = Vec::with_capacity(table.k_plus_1());
    let coords = table
        .iter()
        .map(|s| {
            cols.clear();
            cols.extend(s.iter().map(|&c| c as usize));
            determinant(field, &a.matrix().select_columns(&cols))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PluckerVector { coords })
}

/// `A_{i,j}`: `a` with row `i` replaced by the `j`-th standard basis vector.
pub fn substitute_row<F: Field>(
    field: &F,
    a: &PointMatrix<F::Elem>,
    i: usize,
    j: usize,
) -> Result<PointMatrix<F::Elem>> {
    check_substitution(a, i, j)?;
    let mut out = a.clone();
    let row = out.row_mut(i);
    row.fill(field.zero());
    row[j] = field.one();
    Ok(out)
}

fn check_substitution<T: Copy + Default>(a: &PointMatrix<T>, i: usize, j: usize) -> Result<()> {
    if i > a.k() || j > a.n() {
        return Err(Error::Index(format!("substitution (i={i}, j={j}) outside a {}x{} point", a.k() + 1, a.n() + 1)));
    }
    Ok(())
}

/// Maximal minors of `A_{i,j}` evaluated naively: substitute, then embed.
pub fn substituted_minor_row_naive<F: Field>(
    field: &F,
    a: &PointMatrix<F::Elem>,
    i: usize,
    j: usize,
    table: &SubsetTable,
) -> Result<Vec<F::Elem>> {
    Ok(plucker_embed(field, &substitute_row(field, a, i, j)?, table)?.coords)
}

/// Maximal minors of `A_{i,j}` by the cofactor identity: the entry at subset
/// `S` vanishes unless `j ∈ S`, and otherwise is `(-1)^(i + pos_S(j))` times
/// the minor of `a` without row `i` on columns `S \ {j}`.
pub fn substituted_minor_row<F: Field>(
    field: &F,
    a: &PointMatrix<F::Elem>,
    i: usize,
    j: usize,
    table: &SubsetTable,
) -> Result<Vec<F::Elem>> {
    a.check_table(table)?;
    check_substitution(a, i, j)?;
    let plan = TangentPlan::new(a.n(), a.k())?;
    let minors = plan.deleted_row_minors(field, a, i);
    let mut out = vec![field.zero(); table.len()];
    for (o, slot) in out.iter_mut().enumerate() {
        let s = table.subset(o);
        if let Some(t) = s.iter().position(|&c| c as usize == j) {
            *slot = plan.cofactor(field, &minors, o, i, t);
        }
    }
    Ok(out)
}

struct Level {
    table: SubsetTable,
    /// `drop[o * r + t]` is the ordinal, one level down, of subset `o`
    /// with its `t`-th element removed.
    drop: Vec<u32>,
}

/// Precomputed index tables for evaluating every `r x r` minor of the first
/// `r` rows of an `m x universe` matrix, for `r = 1..=m`.
pub struct MinorPlan {
    universe: usize,
    levels: Vec<Level>,
}

impl MinorPlan {
    pub fn new(universe: usize, m: usize) -> Result<Self> {
        if m > universe {
            return Err(Error::InvalidConfig(format!("{m} rows exceed {universe} columns")));
        }
        let mut levels = Vec::with_capacity(m + 1);
        levels.push(Level { table: SubsetTable::with_sizes(universe, 0)?, drop: vec![] });
        let mut scratch = Vec::with_capacity(m);
        for r in 1..=m {
            let table = SubsetTable::with_sizes(universe, r)?;
            let below = &levels[r - 1].table;
            let mut drop = Vec::with_capacity(table.len() * r);
            for s in table.iter() {
                for t in 0..r {
                    scratch.clear();
                    scratch.extend(s.iter().enumerate().filter(|&(u, _)| u != t).map(|(_, &c)| c as usize));
                    drop.push(below.index_of(&scratch).expect("sub-subset is a member") as u32);
                }
            }
            levels.push(Level { table, drop });
        }
        Ok(Self { universe, levels })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn max_rows(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn table(&self, r: usize) -> &SubsetTable {
        &self.levels[r].table
    }

    /// All `r x r` minors of `rows` (with `r = rows.len()`), indexed by the
    /// level-`r` subset table.
    pub fn minors<F: Field>(&self, field: &F, rows: &[&[F::Elem]]) -> Vec<F::Elem> {
        assert!(rows.len() <= self.max_rows(), "too many rows for this plan");
        let mut prev = vec![field.one()];
        for (r, row) in rows.iter().enumerate() {
            let level = &self.levels[r + 1];
            let width = r + 1;
            let mut next = Vec::with_capacity(level.table.len());
            for (o, s) in level.table.iter().enumerate() {
                let drops = &level.drop[o * width..(o + 1) * width];
                let mut acc = field.zero();
                for (t, (&c, &d)) in s.iter().zip(drops).enumerate() {
                    let term = field.mul(row[c as usize], prev[d as usize]);
                    // expansion along row r: sign (-1)^(r + t)
                    acc = if (r + t) % 2 == 0 { field.add(acc, term) } else { field.sub(acc, term) };
                }
                next.push(acc);
            }
            prev = next;
        }
        prev
    }
}

/// Index tables for building tangent blocks of `G(k, n)`.
pub struct TangentPlan {
    k: usize,
    n: usize,
    minors: MinorPlan,
}

impl TangentPlan {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidConfig(format!("G({k},{n}) requires k <= n")));
        }
        Ok(Self { k, n, minors: MinorPlan::new(n + 1, k + 1)? })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Plücker column table (subsets of size `k+1`).
    pub fn table(&self) -> &SubsetTable {
        self.minors.table(self.k + 1)
    }

    /// Plücker vector through the Laplace recursion.
    pub fn embed<F: Field>(&self, field: &F, a: &PointMatrix<F::Elem>) -> PluckerVector<F::Elem> {
        let rows: Vec<&[F::Elem]> = (0..=self.k).map(|i| a.row(i)).collect();
        PluckerVector { coords: self.minors.minors(field, &rows) }
    }

    /// All `k x k` minors of `a` with row `i` deleted.
    pub fn deleted_row_minors<F: Field>(&self, field: &F, a: &PointMatrix<F::Elem>, i: usize) -> Vec<F::Elem> {
        let rows: Vec<&[F::Elem]> = (0..=self.k).filter(|&r| r != i).map(|r| a.row(r)).collect();
        self.minors.minors(field, &rows)
    }

    /// Entry of `A_{i,j}`'s Plücker vector at subset `o`, where `j` is the
    /// `t`-th element of that subset.
    #[inline]
    pub fn cofactor<F: Field>(&self, field: &F, minors: &[F::Elem], o: usize, i: usize, t: usize) -> F::Elem {
        let w = self.k + 1;
        let m = minors[self.minors.levels[w].drop[o * w + t] as usize];
        if (i + t).is_multiple_of(2) {
            m
        } else {
            field.neg(m)
        }
    }

    /// Writes the `n+1` rows `m_0, ..., m_n` of the block `M_i` into `out`
    /// (which must be zeroed, `(n+1) x C(n+1, k+1)`).
    pub fn fill_block<F: Field>(&self, field: &F, a: &PointMatrix<F::Elem>, i: usize, out: &mut [F::Elem]) {
        let cols = self.table().len();
        debug_assert_eq!(out.len(), (self.n + 1) * cols);
        let minors = self.deleted_row_minors(field, a, i);
        for (o, s) in self.table().iter().enumerate() {
            for (t, &j) in s.iter().enumerate() {
                out[j as usize * cols + o] = self.cofactor(field, &minors, o, i, t);
            }
        }
    }
}
