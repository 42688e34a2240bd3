//! Modular power series over NTT-friendly primes and CRT reconstruction.

use crate::error::{Error, Result};

use super::raw::RawCoeffs;

/// Primes `c * 2^27 + 1` below `2^62` with a primitive root each.
pub(crate) const NTT_PRIMES: [(u64, u64); 8] = [
    (4611686009971671041, 6),
    (4611686007555751937, 3),
    (4611686004066091009, 13),
    (4611686003260784641, 11),
    (4611685996013027329, 7),
    (4611685993060237313, 3),
    (4611685989973229569, 7),
    (4611685984336084993, 15),
];

/// Largest transform length supported by every prime in [`NTT_PRIMES`].
pub(crate) const MAX_NTT_LEN: usize = 1 << 27;

/// Montgomery arithmetic modulo an odd `p < 2^62`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Montgomery {
    p: u64,
    n_prime: u64,
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < 1 << 62);
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Montgomery {
            p,
            n_prime: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_prime);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        self.fold(u)
    }

    /// `x mod p` for `x < 2p`, without a data-dependent branch.
    #[inline(always)]
    fn fold(&self, x: u64) -> u64 {
        let d = x.wrapping_sub(self.p);
        d.wrapping_add(self.p & ((d as i64) >> 63) as u64)
    }

    /// `a * b / 2^64 mod p`.
    #[inline(always)]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        self.fold(a + b)
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        let d = a.wrapping_sub(b);
        d.wrapping_add(self.p & ((d as i64) >> 63) as u64)
    }

    pub(crate) fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn pow_mont(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

/// Number-theoretic transform of a fixed power-of-two length. Data vectors
/// hold ordinary residues; only twiddles live in Montgomery form.
///
/// The forward transform splits `a mod (x^{2t} - c)` into `a mod (x^t - w)` and
/// `a mod (x^t + w)`. Block `i` of every stage then uses the single twiddle
/// `omega^{bitrev(i)}`, so twiddles are stored in bit-reversed order and read
/// sequentially. Outputs come out in a permuted order that the inverse undoes.
pub(crate) struct Ntt {
    m: Montgomery,
    len: usize,
    twiddles: Vec<u64>,
    inv_twiddles: Vec<u64>,
    /// `2^128 / len mod p`, undoing the Montgomery factor of the pointwise
    /// product together with the `1/len` normalisation.
    scale: u64,
}

/// Stages whose blocks fit in this many words run block by block, in cache.
const LOCAL_CHUNK: usize = 1 << 14;

impl Ntt {
    pub(crate) fn new(p: u64, generator: u64, len: usize) -> Self {
        assert!(len.is_power_of_two() && (2..=MAX_NTT_LEN).contains(&len));
        let m = Montgomery::new(p);
        let root = m.pow_mont(m.to_mont(generator), (p - 1) / len as u64);
        let half = len / 2;
        let mut powers = Vec::with_capacity(half);
        let mut w = m.to_mont(1);
        for _ in 0..half {
            powers.push(w);
            w = m.mul(w, root);
        }
        let bits = half.trailing_zeros();
        let rev = |i: usize| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) };
        let twiddles: Vec<u64> = (0..half).map(|i| powers[rev(i)]).collect();
        // omega^{-k} = -omega^{len/2 - k}
        let inv_twiddles: Vec<u64> = (0..half)
            .map(|i| match rev(i) {
                0 => powers[0],
                k => m.sub(0, powers[half - k]),
            })
            .collect();
        drop(powers);
        let inv_len = {
            // len is a power of two and p = 1 mod len
            let mut x = 1u64;
            let inv2 = p.div_ceil(2);
            for _ in 0..len.trailing_zeros() {
                x = ((x as u128 * inv2 as u128) % p as u128) as u64;
            }
            x
        };
        let scale = m.mul(m.mul(inv_len, m.r2), m.r2);
        Ntt {
            m,
            len,
            twiddles,
            inv_twiddles,
            scale,
        }
    }

    pub(crate) fn modulus(&self) -> u64 {
        self.m.p
    }

    /// One forward stage with half-block size `t` over `a`, whose first block
    /// has global index `first_block`.
    #[inline]
    fn forward_stage(&self, a: &mut [u64], t: usize, first_block: usize) {
        let m = &self.m;
        for (i, block) in a.chunks_exact_mut(2 * t).enumerate() {
            let w = self.twiddles[first_block + i];
            let (lo, hi) = block.split_at_mut(t);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let x = *u;
                let y = m.mul(*v, w);
                *u = m.add(x, y);
                *v = m.sub(x, y);
            }
        }
    }

    #[inline]
    fn inverse_stage(&self, a: &mut [u64], t: usize, first_block: usize) {
        let m = &self.m;
        for (i, block) in a.chunks_exact_mut(2 * t).enumerate() {
            let w = self.inv_twiddles[first_block + i];
            let (lo, hi) = block.split_at_mut(t);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*u, *v);
                *u = m.add(x, y);
                *v = m.mul(m.sub(x, y), w);
            }
        }
    }

    fn forward(&self, a: &mut [u64]) {
        let n = self.len;
        let chunk = LOCAL_CHUNK.min(n);
        let mut t = n / 2;
        while 2 * t > chunk {
            self.forward_stage(a, t, 0);
            t /= 2;
        }
        for (c, part) in a.chunks_exact_mut(chunk).enumerate() {
            let mut t = t;
            while t >= 1 {
                self.forward_stage(part, t, c * (chunk / (2 * t)));
                t /= 2;
            }
        }
    }

    /// Inverse of [`Ntt::forward`] up to the factor `len`.
    fn inverse_unscaled(&self, a: &mut [u64]) {
        let n = self.len;
        let chunk = LOCAL_CHUNK.min(n);
        for (c, part) in a.chunks_exact_mut(chunk).enumerate() {
            let mut t = 1;
            while 2 * t <= chunk {
                self.inverse_stage(part, t, c * (chunk / (2 * t)));
                t *= 2;
            }
        }
        let mut t = chunk;
        while t < n {
            self.inverse_stage(a, t, 0);
            t *= 2;
        }
    }

    fn finish(&self, mut buf: Vec<u64>, out_len: usize) -> Vec<u64> {
        self.inverse_unscaled(&mut buf);
        buf.truncate(out_len);
        for x in buf.iter_mut() {
            *x = self.m.mul(*x, self.scale);
        }
        buf.shrink_to_fit();
        buf
    }

    fn load(&self, a: &[u64]) -> Vec<u64> {
        let mut buf = Vec::with_capacity(self.len);
        buf.extend_from_slice(a);
        buf.resize(self.len, 0);
        buf
    }

    /// First `out_len` coefficients of `a * b`. Requires
    /// `a.len() + b.len() - 1 <= len`.
    pub(crate) fn multiply_truncated(&self, a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
        assert!(a.len() + b.len() - 1 <= self.len);
        let mut fa = self.load(a);
        let mut fb = self.load(b);
        self.forward(&mut fa);
        self.forward(&mut fb);
        for (x, &y) in fa.iter_mut().zip(fb.iter()) {
            *x = self.m.mul(*x, y);
        }
        drop(fb);
        self.finish(fa, out_len)
    }

    pub(crate) fn square_truncated(&self, a: &[u64], out_len: usize) -> Vec<u64> {
        assert!(2 * a.len() - 1 <= self.len);
        let mut fa = self.load(a);
        self.forward(&mut fa);
        for x in fa.iter_mut() {
            *x = self.m.mul(*x, *x);
        }
        self.finish(fa, out_len)
    }
}

/// Transform length needed for truncated products of length `n`.
pub(crate) fn ntt_len_for(n: usize) -> Result<usize> {
    let len = (2 * n - 1).next_power_of_two().max(2);
    if len > MAX_NTT_LEN {
        return Err(Error::CapacityExceeded {
            what: format!("series of length {n} needs a transform of length {len}"),
            max_feasible: (MAX_NTT_LEN / 2) as u64,
        });
    }
    Ok(len)
}

/// Reconstructs signed integers from residues modulo the first `k` NTT primes
/// with Garner's mixed-radix algorithm.
pub(crate) struct Crt {
    primes: Vec<u64>,
    /// `inv[i][j] = p_i^{-1} mod p_j` for `i < j`.
    inv: Vec<Vec<u64>>,
    modulus: Vec<u64>,
    half: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// `acc = acc * k + add` on unsigned limbs, wrapping.
fn mul_add_small(acc: &mut [u64], k: u64, add: u64) {
    let mut carry = add as u128;
    for l in acc.iter_mut() {
        let t = *l as u128 * k as u128 + carry;
        *l = t as u64;
        carry = t >> 64;
    }
}

fn cmp_limbs(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

fn sub_limbs(a: &mut [u64], b: &[u64]) {
    let mut borrow = false;
    for (x, &y) in a.iter_mut().zip(b.iter()) {
        let (v1, b1) = x.overflowing_sub(y);
        let (v2, b2) = v1.overflowing_sub(borrow as u64);
        *x = v2;
        borrow = b1 || b2;
    }
}

impl Crt {
    pub(crate) fn new(count: usize) -> Self {
        let primes: Vec<u64> = NTT_PRIMES[..count].iter().map(|&(p, _)| p).collect();
        let inv = (0..count)
            .map(|i| {
                (0..count)
                    .map(|j| {
                        if i < j {
                            powmod(primes[i] % primes[j], primes[j] - 2, primes[j])
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let width = count + 1;
        let mut modulus = vec![0u64; width];
        modulus[0] = 1;
        for &p in &primes {
            mul_add_small(&mut modulus, p, 0);
        }
        let mut half = modulus.clone();
        // floor(M / 2)
        let mut carry = 0u64;
        for l in half.iter_mut().rev() {
            let next = *l & 1;
            *l = (*l >> 1) | (carry << 63);
            carry = next;
        }
        Crt {
            primes,
            inv,
            modulus,
            half,
        }
    }

    /// Writes the symmetric representative of the residues into `out`, which
    /// must be wide enough to hold it.
    pub(crate) fn reconstruct(&self, residues: &[u64], out: &mut [u64]) {
        let k = self.primes.len();
        let mut digits = [0u64; 8];
        for j in 0..k {
            let p = self.primes[j];
            let mut x = residues[j] % p;
            for i in 0..j {
                let d = digits[i] % p;
                x = if x >= d { x - d } else { x + p - d };
                x = mulmod(x, self.inv[i][j], p);
            }
            digits[j] = x;
        }
        let mut acc = [0u64; 9];
        let acc = &mut acc[..k + 1];
        acc[0] = digits[k - 1];
        for i in (0..k - 1).rev() {
            mul_add_small(acc, self.primes[i], digits[i]);
        }
        if cmp_limbs(acc, &self.half) == std::cmp::Ordering::Greater {
            sub_limbs(acc, &self.modulus);
        }
        let w = out.len();
        if w <= acc.len() {
            out.copy_from_slice(&acc[..w]);
        } else {
            out[..acc.len()].copy_from_slice(acc);
            let ext = if acc[acc.len() - 1] >> 63 == 1 { u64::MAX } else { 0 };
            out[acc.len()..].fill(ext);
        }
    }
}

/// Packs the CRT reconstruction of `residues[prime][coeff]` into a raw table.
pub(crate) fn reconstruct_all(residues: &[Vec<u64>], width: usize) -> RawCoeffs {
    let k = residues.len();
    let len = residues[0].len();
    let crt = Crt::new(k);
    let mut raw = RawCoeffs::zeroed(width, len);
    let mut r = vec![0u64; k];
    for i in 0..len {
        for (j, col) in residues.iter().enumerate() {
            r[j] = col[i];
        }
        crt.reconstruct(&r, raw.limbs_mut(i + 1));
    }
    raw
}

/// Residue of a signed integer modulo `p`.
pub(crate) fn reduce_i128(v: i128, p: u64) -> u64 {
    v.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn naive(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < n {
                    out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
                }
            }
        }
        out
    }

    #[test]
    fn products_match_schoolbook() {
        for &(p, g) in NTT_PRIMES.iter().take(3) {
            let a: Vec<u64> = (0..37u64).map(|i| (i * i * 7919 + 3) % p).collect();
            let b: Vec<u64> = (0..29u64).map(|i| p - 1 - (i * 104729) % p).collect();
            let ntt = Ntt::new(p, g, 128);
            assert_eq!(ntt.multiply_truncated(&a, &b, 50), naive(&a, &b, 50, p));
            assert_eq!(ntt.square_truncated(&a, 60), naive(&a, &a, 60, p));
        }
    }

    #[test]
    fn crt_recovers_signed_values() {
        let crt = Crt::new(3);
        let samples: Vec<BigInt> = vec![
            BigInt::from(0),
            BigInt::from(-1),
            BigInt::from(123_456_789_012_345i64),
            BigInt::from(-98_765_432_109_876_543_210i128),
            BigInt::from(3) << 140u32,
            -(BigInt::from(5) << 150u32),
        ];
        for v in samples {
            let residues: Vec<u64> = NTT_PRIMES[..3]
                .iter()
                .map(|&(p, _)| {
                    let r = v.clone() % BigInt::from(p);
                    let r = if r < BigInt::from(0) { r + BigInt::from(p) } else { r };
                    u64::try_from(r).unwrap()
                })
                .collect();
            let mut out = [0u64; 3];
            crt.reconstruct(&residues, &mut out);
            let raw = RawCoeffs::from_limbs(3, out.to_vec());
            assert_eq!(raw.get_bigint(1), v);
        }
    }
}

