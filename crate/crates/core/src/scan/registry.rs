//! Known results about secant varieties of Grassmannians.

use crate::combin::binomial;

/// Sporadic defective cells `(k, n, s, defect)` with `k >= 2`.
pub const SPORADIC_DEFECTIVE: [(usize, usize, usize, usize); 4] =
    [(2, 6, 3, 1), (3, 7, 3, 1), (3, 7, 4, 4), (2, 8, 4, 2)];

/// What the known theory says about one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// One of [`SPORADIC_DEFECTIVE`].
    Sporadic { defect: usize },
    /// Grassmannian of lines (or its dual): dimension known in closed form.
    Lines { dim: usize },
    /// `s(k+1) <= n+1` with `k >= 2`: expected dimension.
    Cgg,
    /// `G(0, n)` is projective space; every secant has the expected dimension.
    ProjectiveSpace,
    /// Nothing known.
    Unknown,
}

/// The registry of known results.
pub struct DefectRegistry;

impl DefectRegistry {
    /// Reduces `k` to `min(k, n-1-k)`; `G(k, n)` and `G(n-1-k, n)` are
    /// isomorphic as embedded varieties.
    pub fn canonical_k(k: usize, n: usize) -> usize {
        k.min(n - 1 - k)
    }

    pub fn expectation(k: usize, n: usize, s: usize) -> Expectation {
        let kc = Self::canonical_k(k, n);
        if let Some(&(_, _, _, d)) = SPORADIC_DEFECTIVE.iter().find(|c| (c.0, c.1, c.2) == (kc, n, s)) {
            return Expectation::Sporadic { defect: d };
        }
        match kc {
            0 => Expectation::ProjectiveSpace,
            1 => Expectation::Lines { dim: lines_oracle(n, s) },
            _ if s * (kc + 1) <= n + 1 => Expectation::Cgg,
            _ => Expectation::Unknown,
        }
    }

    /// Whether the registry records `G(k, n)^s` as defective.
    pub fn is_known_defective(k: usize, n: usize, s: usize) -> bool {
        match Self::expectation(k, n, s) {
            Expectation::Sporadic { .. } => true,
            Expectation::Lines { dim } => dim < super::expected_dim(k, n, s),
            _ => false,
        }
    }
}

/// Projective dimension of `G(1, n)^s`: the skew-symmetric
/// `(n+1) x (n+1)` matrices of rank at most `2s`, projectivised.
pub fn lines_oracle(n: usize, s: usize) -> usize {
    let total = binomial(n as u64 + 1, 2) as usize - 1;
    let free = (n + 1).saturating_sub(2 * s) as u64;
    total - binomial(free, 2) as usize
}
