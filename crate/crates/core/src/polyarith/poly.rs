use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Nonconstant polynomial with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigInt>,
    disc: BigInt,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::DegreeZero);
        }
        let disc = discriminant(&coeffs);
        Ok(Poly { coeffs, disc })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonconstant")
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients as `i64` when they all fit.
    pub fn small_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue below p"))
            .collect()
    }

    /// Content: gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `sum |c_i| x^i`, an upper bound for `|P(n)|` on `0 <= n <= x`.
    pub fn value_bound(&self, x: u64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + c.abs())
    }
}

/// `disc(P) = (-1)^{n(n-1)/2} res(P, P') / a_n`; linear polynomials get 1.
fn discriminant(coeffs: &[BigInt]) -> BigInt {
    let n = coeffs.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let deriv: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant(coeffs, &deriv);
    let lead = &coeffs[n];
    let q = res / lead;
    if (n * (n - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

/// Resultant as the determinant of the Sylvester matrix, by fraction-free
/// (Bareiss) elimination.
pub(crate) fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut a = vec![vec![BigInt::zero(); size]; size];
    // rows hold coefficients from the leading one down
    for r in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            a[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            a[n + r][r + j] = c.clone();
        }
    }
    bareiss_det(a)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let size = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[size - 1][size - 1]
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one() && i > 0;
            if !unit {
                write!(f, "{mag}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse_poly(s)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
