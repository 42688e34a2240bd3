use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{primes_up_to, segmented_primes};
use crate::error::{Error, Result};

use super::modp::FpPoly;
use super::poly::Poly;

/// At or below this prime, root counts come from evaluating every residue.
pub const BRUTE_FORCE_LIMIT: u64 = 997;

/// Number of distinct roots of `P mod p`.
///
/// Above [`BRUTE_FORCE_LIMIT`] this is `deg gcd(x^p - x, P mod p)`, which is
/// right even when `p | disc(P)` because `x^p - x` is squarefree.
pub fn rho(poly: &Poly, p: u64) -> Result<u32> {
    let f = FpPoly::from_poly(poly, p);
    match f.degree() {
        None => Err(Error::DegeneratePrime(p)),
        Some(0) => Ok(0),
        Some(_) if p <= BRUTE_FORCE_LIMIT => Ok((0..p).filter(|&a| f.eval(a) == 0).count() as u32),
        Some(1) => Ok(1),
        Some(_) => {
            let x = FpPoly::x(p);
            let g = x.pow_mod(p, &f).sub(&x).gcd(&f);
            Ok(g.degree().unwrap_or(0) as u32)
        }
    }
}

/// `rho(p)` for every prime `p <= p_max`, with degenerate primes listed apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoTable {
    poly: Poly,
    p_max: u64,
    entries: Vec<(u64, u32)>,
    degenerate: Vec<u64>,
}

impl RhoTable {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    /// `(p, rho(p))` in increasing `p`.
    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    /// Primes dividing every coefficient; they have no entry.
    pub fn degenerate(&self) -> &[u64] {
        &self.degenerate
    }

    pub fn get(&self, p: u64) -> Option<u32> {
        self.entries
            .binary_search_by_key(&p, |&(q, _)| q)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// `sum rho(p) / pi(p_max)`; tends to the number of irreducible factors.
    pub fn mean_ratio(&self) -> f64 {
        let total: u64 = self.entries.iter().map(|&(_, r)| r as u64).sum();
        let count = self.entries.len() + self.degenerate.len();
        total as f64 / count.max(1) as f64
    }
}

pub fn rho_table(poly: &Poly, p_max: u64) -> Result<RhoTable> {
    let primes = segmented_primes(p_max)?.into_vec();
    let results: Vec<(u64, Result<u32>)> = primes
        .par_chunks(4096)
        .flat_map_iter(|chunk| chunk.iter().map(|&p| (p, rho(poly, p))))
        .collect();
    let mut entries = Vec::with_capacity(results.len());
    let mut degenerate = Vec::new();
    for (p, r) in results {
        match r {
            Ok(r) => entries.push((p, r)),
            Err(Error::DegeneratePrime(_)) => degenerate.push(p),
            Err(e) => return Err(e),
        }
    }
    Ok(RhoTable {
        poly: poly.clone(),
        p_max,
        entries,
        degenerate,
    })
}

/// Degrees of the irreducible factors of `P mod p`, sorted ascending: the
/// cycle type of Frobenius at an unramified prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorizationPattern {
    pub p: u64,
    pub degrees: Vec<u32>,
}

impl FactorizationPattern {
    /// Number of linear factors, i.e. `rho(p)`.
    pub fn linear_count(&self) -> u32 {
        self.degrees.iter().filter(|&&d| d == 1).count() as u32
    }

    /// Degrees joined by `;`, the key used in frequency tables.
    pub fn key(&self) -> String {
        pattern_key(&self.degrees)
    }
}

pub(crate) fn pattern_key(degrees: &[u32]) -> String {
    degrees
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

impl fmt::Display for FactorizationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} mod {}", self.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "), self.p)
    }
}

fn divides(p: u64, n: &BigInt) -> bool {
    n.mod_floor(&BigInt::from(p)).is_zero()
}

/// Distinct-degree factorization of `P mod p`. Requires `p` not to divide the
/// discriminant or the leading coefficient.
pub fn factor_pattern(poly: &Poly, p: u64) -> Result<FactorizationPattern> {
    if divides(p, poly.disc()) || divides(p, poly.leading()) {
        return Err(Error::RamifiedPrime(p));
    }
    let mut f = FpPoly::from_poly(poly, p).monic();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let mut degrees = Vec::new();
    let mut d = 1u32;
    while let Some(deg) = f.degree() {
        if deg < 2 * d as usize {
            if deg > 0 {
                degrees.push(deg as u32);
            }
            break;
        }
        h = h.pow_mod(p, &f);
        let g = h.sub(&x).gcd(&f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            degrees.extend(std::iter::repeat_n(d, gd / d as usize));
            f = f.div_rem(&g).0;
            h = h.rem(&f);
        }
        d += 1;
    }
    degrees.sort_unstable();
    Ok(FactorizationPattern { p, degrees })
}

/// Evidence that `P` might be reducible over the rationals, if any.
///
/// Checks for rational roots (when the end coefficients are small enough to
/// enumerate divisors) and whether every pattern over the first unramified
/// primes admits a factor of one common proper degree. The second test only
/// raises suspicion: some irreducible polynomials, such as `x^4 + 1`, split
/// modulo every prime.
pub fn irreducibility_hint(poly: &Poly) -> Option<String> {
    const SAMPLE_PRIMES: usize = 20;
    if let Some(r) = rational_root(poly) {
        return Some(format!("{poly} has the rational root {r}"));
    }
    let n = poly.degree();
    if n < 2 {
        return None;
    }
    let mut common: Vec<bool> = vec![true; n + 1];
    let mut seen = 0;
    for p in primes_up_to(1 << 20) {
        let Ok(pat) = factor_pattern(poly, p) else {
            continue;
        };
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for &d in &pat.degrees {
            for s in (d as usize..=n).rev() {
                reach[s] |= reach[s - d as usize];
            }
        }
        for (c, r) in common.iter_mut().zip(&reach) {
            *c &= *r;
        }
        seen += 1;
        if seen == SAMPLE_PRIMES {
            break;
        }
    }
    (1..n).find(|&k| common[k]).map(|k| {
        format!(
            "every factorization pattern over the first {SAMPLE_PRIMES} unramified primes \
             admits a degree-{k} factor; {poly} may be reducible"
        )
    })
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&v| v <= 1 << 40)?;
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    Some(out)
}

fn rational_root(poly: &Poly) -> Option<String> {
    let c = poly.coeffs();
    if c[0].is_zero() {
        return Some("0".into());
    }
    let nums = small_divisors(&c[0])?;
    let dens = small_divisors(poly.leading())?;
    for &q in &dens {
        for &a in &nums {
            if a.gcd(&q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                // q^n P(a/q) = sum c_i a^i q^{n-i}
                let (a_big, q_big) = (BigInt::from(a) * sign, BigInt::from(q));
                let n = poly.degree();
                let mut acc = BigInt::zero();
                for (i, ci) in c.iter().enumerate() {
                    acc += ci * num_traits::pow(a_big.clone(), i) * num_traits::pow(q_big.clone(), n - i);
                }
                if acc.is_zero() {
                    let num = a as i64 * sign;
                    return Some(if q == 1 { num.to_string() } else { format!("{num}/{q}") });
                }
            }
        }
    }
    None
}
