//! Oracles and checks shared by the integration suites.

#![allow(dead_code)]

pub mod props;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secant::field::{Field, PrimeField};
use secant::matrix::Matrix;
use secant::rank::rank_exact_reference;

/// Jacobian of `(u_1, w_1, ..., u_s, w_s) -> sum_i u_i w_i^T - w_i u_i^T`
/// at a random point, as rows indexed by parameters and columns by the
/// strictly upper triangular entries. The map is bilinear, so these rows are
/// exact partial derivatives.
fn skew_jacobian<T: Copy>(
    n: usize,
    s: usize,
    mut draw: impl FnMut() -> T,
    zero: T,
    neg: impl Fn(T) -> T,
) -> (usize, usize, Vec<T>) {
    let m = n + 1;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|p| (p + 1..m).map(move |q| (p, q))).collect();
    let cols = pairs.len();
    let mut rows = Vec::new();
    for _ in 0..s {
        let u: Vec<T> = (0..m).map(|_| draw()).collect();
        let w: Vec<T> = (0..m).map(|_| draw()).collect();
        // d/du[a] gives e_a w^T - w e_a^T; d/dw[a] gives u e_a^T - e_a u^T
        for (vec, sign) in [(&w, false), (&u, true)] {
            for a in 0..m {
                let mut row = vec![zero; cols];
                for (c, &(p, q)) in pairs.iter().enumerate() {
                    let v = if p == a {
                        Some(vec[q])
                    } else if q == a {
                        Some(neg(vec[p]))
                    } else {
                        None
                    };
                    if let Some(v) = v {
                        row[c] = if sign { neg(v) } else { v };
                    }
                }
                rows.extend(row);
            }
        }
    }
    (rows.len() / cols, cols, rows)
}

/// Projective dimension of the variety of skew `(n+1) x (n+1)` matrices of
/// rank at most `2s`, from the numerical rank of the parametrisation's
/// Jacobian.
pub fn skew_secant_dim_float(n: usize, s: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, c, data) = skew_jacobian(n, s, || rng.gen_range(-1.0..1.0), 0.0f64, |x| -x);
    let sv = DMatrix::from_row_slice(r, c, &data).singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&x| x > top * 1e-9).count() - 1
}

/// The same dimension computed exactly over `GF(p)`.
pub fn skew_secant_dim_exact(n: usize, s: usize, seed: u64) -> usize {
    let field = PrimeField::new(2_147_483_629).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, c, data) = skew_jacobian(n, s, || rng.gen_range(0..field.modulus()), 0u32, |x| field.neg(x));
    rank_exact_reference(&field, &Matrix::from_vec(r, c, data).unwrap()) - 1
}

/// Checks the closed form against both brute-force computations for
/// `3 <= n <= n_max`, `1 <= s <= n`. Returns the failures.
pub fn validate_lines_oracle(n_max: usize) -> Vec<String> {
    let mut bad = Vec::new();
    for n in 3..=n_max {
        for s in 1..=n {
            let closed = secant::scan::lines_oracle(n, s);
            let f = skew_secant_dim_float(n, s, (n * 31 + s) as u64);
            let e = skew_secant_dim_exact(n, s, (n * 37 + s) as u64);
            if closed != f || closed != e {
                bad.push(format!("n={n} s={s}: closed form {closed}, float {f}, exact {e}"));
            }
        }
    }
    bad
}
