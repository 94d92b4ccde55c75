//! Exact rank over a prime field.
//!
//! [`EchelonBasis`] keeps a row-echelon basis of everything pushed so far.
//! Every basis row has a unit pivot, is zero left of its pivot and is zero
//! in the pivot columns of all earlier basis rows. New rows arrive in
//! batches: each batch is first reduced on its own (dropping dependent
//! rows cheaply), then against the basis, then once more on its own before
//! the survivors are appended. Streaming the basis once per batch keeps the
//! batch rows hot in cache.

use rayon::prelude::*;

use crate::field::{sub_mul_assign, Field, PrimeField, ShoupMul};
use crate::matrix::Matrix;

/// Rows pushed per batch by [`rank_exact`].
const BATCH_ROWS: usize = 96;

#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    cols: usize,
    data: Vec<u32>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        Self { field, cols, data: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Adds the rows of a row-major batch (`rows.len()` a multiple of
    /// `cols`) and returns the new rank. Entries must be reduced mod p.
    pub fn push_rows(&mut self, rows: &[u32]) -> usize {
        assert_eq!(rows.len() % self.cols.max(1), 0, "batch is not a whole number of rows");
        if self.is_full() || rows.is_empty() {
            return self.rank();
        }
        let p = self.field.modulus();
        let cols = self.cols;
        let mut batch: Vec<Vec<u32>> = rows.chunks(cols).map(|r| r.to_vec()).collect();
        if batch.len() > 1 {
            batch = local_echelon(&self.field, cols, batch).into_iter().map(|(_, r)| r).collect();
        }

        // Reduce against the basis in insertion order.
        for (b, &pc) in self.pivots.iter().enumerate() {
            let brow = &self.data[b * cols + pc..(b + 1) * cols];
            let reduce = |t: &mut Vec<u32>| {
                let f = t[pc];
                if f != 0 {
                    sub_mul_assign(&mut t[pc..], brow, ShoupMul::new(f, p));
                }
            };
            if batch.len() * (cols - pc) >= 1 << 16 {
                batch.par_iter_mut().for_each(reduce);
            } else {
                batch.iter_mut().for_each(reduce);
            }
        }

        for (pc, row) in local_echelon(&self.field, cols, batch) {
            if self.is_full() {
                break;
            }
            self.pivots.push(pc);
            self.data.extend_from_slice(&row);
        }
        self.rank()
    }
}

/// Forward elimination of a small set of rows. Returns `(pivot, row)` pairs
/// with unit pivots, in increasing pivot order, each row zero left of its
/// pivot and in the pivot columns of the rows before it.
fn local_echelon(field: &PrimeField, cols: usize, mut rows: Vec<Vec<u32>>) -> Vec<(usize, Vec<u32>)> {
    let p = field.modulus();
    let mut lead: Vec<usize> = rows.iter().map(|r| leading(r, 0)).collect();
    let mut out = Vec::new();
    while let Some((best, &pc)) = lead.iter().enumerate().filter(|(_, &c)| c < cols).min_by_key(|(_, &c)| c) {
        let mut prow = rows.swap_remove(best);
        lead.swap_remove(best);
        let inv = field.inv(prow[pc]).expect("leading entry is nonzero");
        let sinv = ShoupMul::new(inv, p);
        for x in &mut prow[pc..] {
            *x = sinv.mul(*x);
        }
        for (r, l) in rows.iter_mut().zip(lead.iter_mut()) {
            if *l == pc {
                let f = r[pc];
                sub_mul_assign(&mut r[pc..], &prow[pc..], ShoupMul::new(f, p));
                *l = leading(r, pc + 1);
            }
        }
        out.push((pc, prow));
    }
    out
}

/// Index of the first nonzero entry at or after `from`, `row.len()` if none.
fn leading(row: &[u32], from: usize) -> usize {
    row[from..].iter().position(|&x| x != 0).map_or(row.len(), |i| i + from)
}

/// Rank of a matrix over `GF(p)`.
pub fn rank_exact(field: &PrimeField, m: &Matrix<u32>) -> usize {
    let mut basis = EchelonBasis::new(*field, m.cols());
    if m.cols() == 0 {
        return 0;
    }
    let p = field.modulus();
    debug_assert!(m.as_slice().iter().all(|&x| x < p));
    for chunk in m.as_slice().chunks(BATCH_ROWS * m.cols()) {
        if basis.push_rows(chunk) == m.cols() {
            break;
        }
    }
    basis.rank()
}

/// Reference rank by textbook Gauss-Jordan elimination with field inverses.
/// Slow; kept for testing the batched engine.
pub fn rank_exact_reference(field: &PrimeField, m: &Matrix<u32>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a.get(r, c) != 0) else {
            continue;
        };
        a.swap_rows(pr, rank);
        let inv = field.inv(a.get(rank, c)).unwrap();
        for r in 0..rows {
            if r != rank && a.get(r, c) != 0 {
                let f = field.mul(a.get(r, c), inv);
                for cc in c..cols {
                    let v = field.sub(a.get(r, cc), field.mul(f, a.get(rank, cc)));
                    a.set(r, cc, v);
                }
            }
        }
        rank += 1;
    }
    rank
}
