//! Right-hand sides of the Nair-type and classical sieve bounds for
//! nonnegative multiplicative `f`, and the condition under which a matching
//! lower bound is available.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::NeumaierSum;
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::factorsieve::ValueSieve;
use crate::polyarith::{Poly, RhoTable};

/// Default floor for `sum_{p <= y} f(p) log p / y`.
pub const DEFAULT_LOWER_FLOOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Nair,
    ClassicalUpper,
    ClassicalLower,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Nair => "nair",
            BoundKind::ClassicalUpper => "classical_upper",
            BoundKind::ClassicalLower => "classical_lower",
        })
    }
}

/// `bound = X exp(exponent_sum)`. For the classical kinds the exponent is the
/// log of the Euler product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x: u64,
    pub kind: BoundKind,
    pub exponent_sum: f64,
    pub bound: f64,
}

impl BoundReport {
    fn new(x: u64, kind: BoundKind, exponent_sum: f64) -> Self {
        BoundReport {
            x,
            kind,
            exponent_sum,
            bound: x as f64 * exponent_sum.exp(),
        }
    }
}

/// Common shapes of `f` at primes, for the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PrimeWeight {
    /// `f(p) = c`
    Constant(f64),
    /// `f(p) = 1` if `p = r (mod m)`, else 0
    Residue { modulus: u64, residue: u64 },
    /// `f(p) = 1 + kronecker(d, p)`
    OnePlusChar(i64),
}

impl PrimeWeight {
    pub fn at(&self, p: u64) -> f64 {
        match *self {
            PrimeWeight::Constant(c) => c,
            PrimeWeight::Residue { modulus, residue } => (p % modulus == residue) as u8 as f64,
            PrimeWeight::OnePlusChar(d) => 1.0 + crate::arith::kronecker(d, p) as f64,
        }
    }
}

impl fmt::Display for PrimeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeWeight::Constant(c) => write!(f, "const:{c}"),
            PrimeWeight::Residue { modulus, residue } => write!(f, "mod:{modulus}:{residue}"),
            PrimeWeight::OnePlusChar(d) => write!(f, "char:{d}"),
        }
    }
}

impl FromStr for PrimeWeight {
    type Err = Error;

    /// `const:C`, `mod:M:R` or `char:D`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("bad prime weight `{s}`; expected const:C, mod:M:R or char:D"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["const", c] => {
                let c: f64 = c.parse().map_err(|_| bad())?;
                if !(c.is_finite() && c >= 0.0) {
                    return Err(bad());
                }
                Ok(PrimeWeight::Constant(c))
            }
            ["mod", m, r] => {
                let modulus: u64 = m.parse().map_err(|_| bad())?;
                let residue: u64 = r.parse().map_err(|_| bad())?;
                if modulus == 0 || residue >= modulus {
                    return Err(bad());
                }
                Ok(PrimeWeight::Residue { modulus, residue })
            }
            ["char", d] => Ok(PrimeWeight::OnePlusChar(d.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

fn checked_f(f: impl Fn(u64) -> f64, p: u64) -> Result<f64> {
    let v = f(p);
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::Domain(format!("f({p}) = {v} must be finite and nonnegative")))
    }
}

/// `X exp(sum_{p <= X} rho(p) (f(p) - 1) / p)`, skipping degenerate primes.
pub fn nair_bound(f: impl Fn(u64) -> f64, rho: &RhoTable, x: u64) -> Result<BoundReport> {
    if rho.p_max() < x {
        return Err(Error::IncompleteTable {
            missing: primes_up_to(x)
                .skip_while(|&p| p <= rho.p_max())
                .take(crate::analysis::MISSING_LIST_CAP)
                .collect(),
        });
    }
    let mut s = NeumaierSum::default();
    for &(p, r) in rho.entries() {
        if p > x {
            break;
        }
        if r > 0 {
            s.add(r as f64 * (checked_f(&f, p)? - 1.0) / p as f64);
        }
    }
    Ok(BoundReport::new(x, BoundKind::Nair, s.value()))
}

/// `X prod_{p <= X} (1 + (f(p) - 1) / p)`.
pub fn classical_product_bound(f: impl Fn(u64) -> f64, x: u64) -> Result<BoundReport> {
    let mut s = NeumaierSum::default();
    for p in primes_up_to(x) {
        s.add(ln_factor(checked_f(&f, p)? - 1.0, p));
    }
    Ok(BoundReport::new(x, BoundKind::ClassicalUpper, s.value()))
}

/// `log(1 + a / p)`
fn ln_factor(a: f64, p: u64) -> f64 {
    (a / p as f64).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCheck {
    pub y: u64,
    pub ratio: f64,
    pub floor: f64,
    pub satisfied: bool,
}

/// `ratio = sum_{p <= y} f(p) log p / y`, satisfied when `ratio >= floor`.
pub fn lower_bound_condition(f: impl Fn(u64) -> f64, y: u64, floor: f64) -> Result<LowerBoundCheck> {
    if y < 2 {
        return Err(Error::Domain(format!("y = {y} must be at least 2")));
    }
    let mut s = NeumaierSum::default();
    for p in primes_up_to(y) {
        s.add(checked_f(&f, p)? * (p as f64).ln());
    }
    let ratio = s.value() / y as f64;
    Ok(LowerBoundCheck {
        y,
        ratio,
        floor,
        satisfied: ratio >= floor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub x: u64,
    /// `sum_{n <= X} f(n^2 + 1)` with `f(p) = 1` for `p = 3 (mod 4)`, else 0.
    pub sum: f64,
    /// `X prod_{p <= X, p = 1 (mod 4)} (1 - 2/p)`
    pub pseudo_lower_bound: f64,
    pub bound: BoundReport,
}

/// Multiplicative `f` supported on primes `3 mod 4` summed along `n^2 + 1`,
/// against the product a lower-bound sieve would predict.
pub fn counterexample_demo(x: u64) -> Result<CounterexampleReport> {
    if x < 2 {
        return Err(Error::Domain(format!("X = {x} must be at least 2")));
    }
    let f = |p: u64| (p % 4 == 3) as u8 as f64;
    let poly = Poly::from_i64(&[1, 0, 1])?;
    let sieve = ValueSieve::new(&poly, x)?;
    let partials = sieve.map_blocks(|vals| {
        let mut s = NeumaierSum::default();
        for vf in vals {
            let mut t: f64 = vf.factors.iter().map(|&(p, _)| f(p)).product();
            if vf.cofactor > 1 {
                t *= f(vf.cofactor);
            }
            s.add(t);
        }
        s.value()
    });
    let mut sum = NeumaierSum::default();
    partials.into_iter().for_each(|v| sum.add(v));
    let mut e = NeumaierSum::default();
    for p in primes_up_to(x).filter(|p| p % 4 == 1) {
        e.add(ln_factor(-2.0, p));
    }
    let bound = BoundReport::new(x, BoundKind::ClassicalLower, e.value());
    Ok(CounterexampleReport {
        x,
        sum: sum.value(),
        pseudo_lower_bound: bound.bound,
        bound,
    })
}
