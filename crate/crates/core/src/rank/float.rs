//! Numerical rank from singular values.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Number of singular values above `rel_tol * sigma_max`.
pub fn rank_float(m: &Matrix<f64>, rel_tol: f64) -> Result<usize> {
    Ok(count_above(&singular_values(m)?, rel_tol))
}

/// Singular values in no particular order.
pub fn singular_values(m: &Matrix<f64>) -> Result<Vec<f64>> {
    if let Some(i) = m.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { row: i / m.cols(), col: i % m.cols() });
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Vec::new());
    }
    let dm = DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice());
    Ok(dm.singular_values().iter().copied().collect())
}

pub(crate) fn count_above(sv: &[f64], rel_tol: f64) -> usize {
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&x| x > rel_tol * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RealField;

    #[test]
    fn threshold_semantics() {
        let m = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1e-3, 0.0], [0.0, 0.0, 1e-12]]).unwrap();
        assert_eq!(rank_float(&m, 1e-8).unwrap(), 2);
        assert_eq!(rank_float(&m, 1e-14).unwrap(), 3);
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(rank_float(&Matrix::identity(&RealField, 10), 1e-8).unwrap(), 10);
        assert_eq!(rank_float(&Matrix::zeros(3, 4), 1e-8).unwrap(), 0);
    }

    #[test]
    fn non_finite_rejected() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [f64::NAN, 0.0]]).unwrap();
        assert!(matches!(rank_float(&m, 1e-8), Err(Error::NonFinite { row: 1, col: 0 })));
    }
}
