//! Binomial coefficients and lexicographic enumeration of fixed-size
//! subsets, used to index Plücker coordinates.

use crate::error::{Error, Result};

/// `C(a, b)`, zero when `b > a`. Exact for every `a <= 64`.
pub fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u128 = 1;
    for i in 0..b {
        // r * (a - i) is divisible by i + 1 after the multiplication.
        r = r * (a - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(r).expect("binomial coefficient exceeds u64")
}

/// All `(k+1)`-element subsets of `{0, ..., n}` in lexicographic order,
/// with the inverse map from subset to ordinal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetTable {
    n_plus_1: usize,
    k_plus_1: usize,
    subsets: Vec<u8>,
    /// `choose[a][b] = C(a, b)` for `a <= n+1`, `b <= k+1`.
    choose: Vec<Vec<usize>>,
}

impl SubsetTable {
    /// Table for `G(k, n)`: subsets of size `k+1` drawn from `n+1` indices.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidConfig(format!("subset size k+1 = {} exceeds n+1 = {}", k + 1, n + 1)));
        }
        Self::with_sizes(n + 1, k + 1)
    }

    /// Table of `size`-subsets of `{0, ..., universe-1}`; `size` may be 0.
    pub fn with_sizes(universe: usize, size: usize) -> Result<Self> {
        if size > universe {
            return Err(Error::InvalidConfig(format!("subset size {size} exceeds universe {universe}")));
        }
        if universe > u8::MAX as usize {
            return Err(Error::InvalidConfig(format!("universe {universe} too large")));
        }
        let choose: Vec<Vec<usize>> =
            (0..=universe).map(|a| (0..=size).map(|b| binomial(a as u64, b as u64) as usize).collect()).collect();
        let count = choose[universe][size];
        let mut subsets = Vec::with_capacity(count * size);
        let mut cur: Vec<u8> = (0..size as u8).collect();
        for _ in 0..count {
            subsets.extend_from_slice(&cur);
            // Advance to the lexicographic successor.
            let mut i = size;
            while i > 0 && cur[i - 1] as usize == universe - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..size {
                cur[j] = cur[j - 1] + 1;
            }
        }
        Ok(Self { n_plus_1: universe, k_plus_1: size, subsets, choose })
    }

    pub fn n_plus_1(&self) -> usize {
        self.n_plus_1
    }

    pub fn k_plus_1(&self) -> usize {
        self.k_plus_1
    }

    pub fn len(&self) -> usize {
        self.choose[self.n_plus_1][self.k_plus_1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The subset with the given ordinal.
    #[inline]
    pub fn subset(&self, ordinal: usize) -> &[u8] {
        &self.subsets[ordinal * self.k_plus_1..(ordinal + 1) * self.k_plus_1]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        (0..self.len()).map(move |i| self.subset(i))
    }

    /// Ordinal of a strictly increasing tuple, `None` if it is not a member.
    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        if subset.len() != self.k_plus_1 {
            return None;
        }
        let m = self.k_plus_1;
        let mut tail = 0usize;
        let mut prev: Option<usize> = None;
        for (i, &c) in subset.iter().enumerate() {
            if c >= self.n_plus_1 || prev.is_some_and(|p| c <= p) {
                return None;
            }
            prev = Some(c);
            // Subsets lexicographically >= the given one, counted from the tail.
            tail += self.choose[self.n_plus_1 - 1 - c][m - i];
        }
        Some(self.len() - 1 - tail)
    }
}
