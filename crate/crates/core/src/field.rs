//! Scalar fields the pipeline is generic over: integers modulo a prime and
//! IEEE doubles.

use std::fmt;

use crate::error::{Error, Result};

/// Arithmetic over a field whose elements are plain `Copy` values.
///
/// The field object carries any runtime parameters (the modulus for prime
/// fields) so that elements stay as small as possible.
pub trait Field: Clone + Send + Sync + fmt::Debug {
    type Elem: Copy + PartialEq + Default + Send + Sync + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: Self::Elem) -> bool;
    /// Pivot preference during elimination. Exact fields only care about
    /// zero versus nonzero; floating fields prefer large magnitudes.
    fn pivot_weight(&self, a: Self::Elem) -> f64;
    fn lift_i64(&self, v: i64) -> Self::Elem;
    /// Canonical textual form (representative in `[0, p)` for prime fields).
    fn display(&self, a: Self::Elem) -> String;
}

/// The field with `p` elements, `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Any prime below `2^31` is accepted here; the rank backend imposes its
    /// own, narrower range.
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p as u64) {
            return Err(Error::InvalidConfig(format!("{p} is not a prime below 2^31")));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Reduce an arbitrary `u64` into the field.
    #[inline]
    pub fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: u32) -> Option<u32> {
        mod_inverse(a, self.p)
    }
    #[inline]
    fn is_zero(&self, a: u32) -> bool {
        a == 0
    }
    #[inline]
    fn pivot_weight(&self, a: u32) -> f64 {
        if a == 0 {
            0.0
        } else {
            1.0
        }
    }
    fn lift_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn display(&self, a: u32) -> String {
        a.to_string()
    }
}

/// Double-precision reals.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RealField;

impl Field for RealField {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    #[inline]
    fn add(&self, a: f64, b: f64) -> f64 {
        a + b
    }
    #[inline]
    fn sub(&self, a: f64, b: f64) -> f64 {
        a - b
    }
    #[inline]
    fn mul(&self, a: f64, b: f64) -> f64 {
        a * b
    }
    #[inline]
    fn neg(&self, a: f64) -> f64 {
        -a
    }
    fn inv(&self, a: f64) -> Option<f64> {
        if a == 0.0 {
            None
        } else {
            Some(1.0 / a)
        }
    }
    #[inline]
    fn is_zero(&self, a: f64) -> bool {
        a == 0.0
    }
    #[inline]
    fn pivot_weight(&self, a: f64) -> f64 {
        a.abs()
    }
    fn lift_i64(&self, v: i64) -> f64 {
        v as f64
    }
    fn display(&self, a: f64) -> String {
        format!("{a:e}")
    }
}

fn mod_inverse(a: u32, p: u32) -> Option<u32> {
    if a.is_multiple_of(p) {
        return None;
    }
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i64) as u32)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Precomputed multiplier for Shoup's fixed-operand modular product.
///
/// For `w < p < 2^31` and `y < p`, `mul(y)` returns `w * y mod p` using one
/// widening multiply and wrapping 32-bit arithmetic, which vectorises well.
#[derive(Clone, Copy, Debug)]
pub struct ShoupMul {
    w: u32,
    w_shoup: u32,
    p: u32,
}

impl ShoupMul {
    #[inline]
    pub fn new(w: u32, p: u32) -> Self {
        debug_assert!(w < p && p < (1 << 31));
        let w_shoup = (((w as u64) << 32) / p as u64) as u32;
        Self { w, w_shoup, p }
    }

    #[inline(always)]
    pub fn mul(&self, y: u32) -> u32 {
        let q = ((self.w_shoup as u64 * y as u64) >> 32) as u32;
        let r = self.w.wrapping_mul(y).wrapping_sub(q.wrapping_mul(self.p));
        r.min(r.wrapping_sub(self.p))
    }
}

/// `target[c] -= w * src[c] (mod p)` for every `c`.
#[inline]
pub fn sub_mul_assign(target: &mut [u32], src: &[u32], w: ShoupMul) {
    let p = w.p;
    for (t, &y) in target.iter_mut().zip(src) {
        let v = *t + p - w.mul(y);
        *t = v.min(v.wrapping_sub(p));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
    }

    #[test]
    fn inverse_round_trips() {
        let f = PrimeField::new(2_147_483_647).unwrap();
        for a in [1u32, 2, 3, 12345, 2_147_483_646] {
            let ai = f.inv(a).unwrap();
            assert_eq!(f.mul(a, ai), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn shoup_agrees_with_widening_product() {
        let p = 2_147_483_629u32;
        let ws = [0u32, 1, 2, p - 1, p / 2, 987_654_321];
        let ys = [0u32, 1, p - 1, 123_456_789, p / 3];
        for &w in &ws {
            let s = ShoupMul::new(w, p);
            for &y in &ys {
                assert_eq!(s.mul(y) as u64, (w as u64 * y as u64) % p as u64);
            }
        }
        let mut t = vec![5u32, 0, p - 1];
        sub_mul_assign(&mut t, &[1, 1, p - 1], ShoupMul::new(7, p));
        // (p-1) - 7(p-1) = 6 (mod p)
        assert_eq!(t, vec![p - 2, p - 7, 6]);
    }

    #[test]
    fn rejects_composites_and_large_moduli() {
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(u32::MAX).is_err());
        assert!(PrimeField::new(2).is_ok());
    }
}
