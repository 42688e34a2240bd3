//! Dense polynomials over `F_p` for word-sized primes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{mul_mod, pow_mod, sqrt_mod};
use crate::error::{Error, Result};

use super::poly::Poly;

/// Polynomial over `F_p`, constant term first, no trailing zeros. The zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_poly(poly: &Poly, p: u64) -> Self {
        FpPoly::new(p, poly.reduce_mod(p))
    }

    /// The polynomial `x`.
    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &c| add(mul_mod(acc, x, self.p), c, self.p))
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inverse(lc, self.p);
                FpPoly {
                    p: self.p,
                    c: self.c.iter().map(|&x| mul_mod(x, inv, self.p)).collect(),
                }
            }
        }
    }

    pub fn sub(&self, other: &FpPoly) -> Self {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = other.c.get(i).copied().unwrap_or(0);
                sub(a, b, p)
            })
            .collect();
        FpPoly::new(p, c)
    }

    pub fn mul(&self, other: &FpPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = add(out[i + j], mul_mod(a, b, p), p);
            }
        }
        FpPoly::new(p, out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inverse(d.c[dd], p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let coef = mul_mod(r[k], inv, p);
            if coef == 0 {
                continue;
            }
            q[k - dd] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                let idx = k - dd + j;
                r[idx] = sub(r[idx], mul_mod(coef, dc, p), p);
            }
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::new(self.p, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

#[inline]
fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (if s >= p as u128 { s - p as u128 } else { s }) as u64
}

#[inline]
fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn inverse(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Distinct roots in `[0, p)` of `P mod p`, sorted. Errors with
/// `DegeneratePrime` when every coefficient vanishes mod `p`.
pub fn roots_mod_p(poly: &Poly, p: u64) -> Result<Vec<u64>> {
    let f = FpPoly::from_poly(poly, p);
    match f.degree() {
        None => Err(Error::DegeneratePrime(p)),
        Some(0) => Ok(vec![]),
        Some(_) if p <= 64 => Ok((0..p).filter(|&a| f.eval(a) == 0).collect()),
        Some(1) => {
            let r = mul_mod(p - f.c[0], inverse(f.c[1], p), p);
            Ok(vec![r])
        }
        Some(2) => Ok(quadratic_roots(&f)),
        Some(_) => {
            let g = FpPoly::x(p).pow_mod(p, &f).sub(&FpPoly::x(p)).gcd(&f);
            let mut roots = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            split_linear(&g, &mut rng, &mut roots);
            roots.sort_unstable();
            Ok(roots)
        }
    }
}

fn quadratic_roots(f: &FpPoly) -> Vec<u64> {
    let p = f.p;
    let (c, b, a) = (f.c[0], f.c[1], f.c[2]);
    let disc = sub(mul_mod(b, b, p), mul_mod(4 % p, mul_mod(a, c, p), p), p);
    let Ok(s) = sqrt_mod(disc as i64, p) else {
        return vec![];
    };
    let inv2a = inverse(mul_mod(2, a, p), p);
    let r1 = mul_mod(sub(s, b, p), inv2a, p);
    let r2 = mul_mod(sub(p - s, b, p) % p, inv2a, p);
    let mut roots = vec![r1];
    if r2 != r1 {
        roots.push(r2);
    }
    roots.sort_unstable();
    roots
}

/// Splits a monic product of distinct linear factors (odd `p`) by random
/// shifts, Cantor-Zassenhaus style.
fn split_linear(g: &FpPoly, rng: &mut ChaCha8Rng, roots: &mut Vec<u64>) {
    let p = g.p;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => roots.push(sub(0, g.c[0], p)),
        Some(d) => loop {
            let a = rng.gen_range(0..p);
            let shifted = FpPoly::new(p, vec![a, 1]);
            let h = shifted
                .pow_mod((p - 1) / 2, g)
                .sub(&FpPoly::new(p, vec![1]))
                .gcd(g);
            let dh = h.degree().unwrap_or(0);
            if dh > 0 && dh < d {
                split_linear(&h, rng, roots);
                split_linear(&g.div_rem(&h).0.monic(), rng, roots);
                return;
            }
        },
    }
}
