use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact integer coefficients `a(1..=len)` stored as fixed-width two's
/// complement limbs, little-endian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCoeffs {
    width: usize,
    limbs: Vec<u64>,
}

impl RawCoeffs {
    pub(crate) fn zeroed(width: usize, len: usize) -> Self {
        assert!(width >= 1);
        RawCoeffs {
            width,
            limbs: vec![0; width * len],
        }
    }

    pub(crate) fn from_limbs(width: usize, limbs: Vec<u64>) -> Self {
        assert!(width >= 1 && limbs.len().is_multiple_of(width));
        RawCoeffs { width, limbs }
    }

    /// Packs small coefficients; `values[i]` is `a(i + 1)`.
    pub fn from_i128(values: &[i128]) -> Self {
        let fits_i64 = values.iter().all(|&v| i64::try_from(v).is_ok());
        let width = if fits_i64 { 1 } else { 2 };
        let mut raw = RawCoeffs::zeroed(width, values.len());
        for (i, &v) in values.iter().enumerate() {
            let slot = &mut raw.limbs[i * width..(i + 1) * width];
            slot[0] = v as u64;
            if width == 2 {
                slot[1] = (v >> 64) as u64;
            }
        }
        raw
    }

    pub fn len(&self) -> usize {
        self.limbs.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn all_limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// Limbs of `a(n)`, `n >= 1`.
    pub fn limbs(&self, n: usize) -> &[u64] {
        &self.limbs[(n - 1) * self.width..n * self.width]
    }

    pub(crate) fn limbs_mut(&mut self, n: usize) -> &mut [u64] {
        &mut self.limbs[(n - 1) * self.width..n * self.width]
    }

    fn is_negative(limbs: &[u64]) -> bool {
        limbs[limbs.len() - 1] >> 63 == 1
    }

    pub fn get_bigint(&self, n: usize) -> BigInt {
        let limbs = self.limbs(n);
        let mut v = BigInt::zero();
        for &l in limbs.iter().rev() {
            v = (v << 64) + BigInt::from(l);
        }
        if Self::is_negative(limbs) {
            v -= BigInt::one() << (64 * limbs.len());
        }
        v
    }

    /// `a(n)` when it fits in an `i128`.
    pub fn get_i128(&self, n: usize) -> Option<i128> {
        let limbs = self.limbs(n);
        let low = limbs[0] as u128 | ((*limbs.get(1).unwrap_or(&0) as u128) << 64);
        let v = if limbs.len() == 1 {
            limbs[0] as i64 as i128
        } else {
            low as i128
        };
        let ext = if v < 0 { u64::MAX } else { 0 };
        limbs.iter().skip(2).all(|&l| l == ext).then_some(v)
    }

    pub fn to_f64(&self, n: usize) -> f64 {
        if let Some(v) = self.get_i128(n) {
            return v as f64;
        }
        let limbs = self.limbs(n);
        let negative = Self::is_negative(limbs);
        let mut mag: Vec<u64> = limbs.to_vec();
        if negative {
            negate(&mut mag);
        }
        let mut v = 0f64;
        for &l in mag.iter().rev() {
            v = v * 18_446_744_073_709_551_616.0 + l as f64;
        }
        if negative {
            -v
        } else {
            v
        }
    }
}

/// In-place two's complement negation.
pub(crate) fn negate(limbs: &mut [u64]) {
    let mut carry = true;
    for l in limbs.iter_mut() {
        let (v, c) = (!*l).overflowing_add(carry as u64);
        *l = v;
        carry = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packs_and_reads() {
        let vals = [1i128, -24, 252, i64::MIN as i128, 1 << 70, -(1 << 90)];
        let raw = RawCoeffs::from_i128(&vals);
        assert_eq!(raw.width(), 2);
        for (i, &v) in vals.iter().enumerate() {
            assert_eq!(raw.get_i128(i + 1), Some(v));
            assert_eq!(raw.get_bigint(i + 1), BigInt::from(v));
            assert_eq!(raw.to_f64(i + 1), v as f64);
        }
        let small = RawCoeffs::from_i128(&[3, -7]);
        assert_eq!(small.width(), 1);
        assert_eq!(small.get_i128(2), Some(-7));
    }

    #[test]
    fn wide_values() {
        let mut raw = RawCoeffs::zeroed(3, 1);
        // -(2^140) in three limbs
        let mut limbs = [0u64, 0, 1 << 12];
        negate(&mut limbs);
        raw.limbs_mut(1).copy_from_slice(&limbs);
        assert_eq!(raw.get_i128(1), None);
        assert_eq!(raw.get_bigint(1), -(BigInt::one() << 140u32));
        assert_eq!(raw.to_f64(1), -(2f64.powi(140)));
    }
}
