//! Simultaneous factorization of `|P(n)|` for `1 <= n <= X`.
//!
//! For every prime `p` up to `sqrt(max |P(n)|)` the sieve walks the
//! progressions `n = r (mod p)` over the roots `r` of `P mod p` and divides
//! `p` out of the corresponding values as often as it goes. What remains of a
//! value after all sieving primes is 1 or a single prime, because it has no
//! prime factor below the square root of its own size.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::analysis::{checkpoints, SumSeries, SumSeriesBuilder, DEFAULT_CHECKPOINT_RATIO, DEFAULT_CHECKPOINT_START};
use crate::arith::{isqrt, primes_up_to};
use crate::eigenvalues::EigenProvider;
use crate::error::{Error, Result};
use crate::polyarith::{roots_mod_p, Poly};

/// Largest sieving prime; values up to about `2^54` can be factored.
pub const MAX_SIEVE_PRIME: u64 = 1 << 27;
/// Values handled per block.
pub const BLOCK_LEN: u64 = 1 << 15;

/// Factorization of one value `|P(n)|`. A zero value has no factors and
/// cofactor 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueFactorization {
    pub n: u64,
    pub value: u64,
    pub negative: bool,
    pub factors: SmallVec<[(u64, u32); 6]>,
    pub cofactor: u64,
}

impl ValueFactorization {
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Whether `cofactor * prod p^e` reproduces the value exactly.
    pub fn reconstructs(&self) -> bool {
        if self.is_zero() {
            return self.factors.is_empty() && self.cofactor == 0;
        }
        let mut acc: u128 = self.cofactor as u128;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                acc *= p as u128;
                if acc > u64::MAX as u128 {
                    return false;
                }
            }
        }
        acc == self.value as u128
    }

    /// `n,value,p:e;p:e,cofactor`
    pub fn dump_line(&self) -> String {
        let mut s = format!("{},{},", self.n, self.value);
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            write!(s, "{p}:{e}").expect("write to String");
        }
        write!(s, ",{}", self.cofactor).expect("write to String");
        s
    }
}

/// Prepared progressions for sieving `|P(n)|`, `n <= X`.
#[derive(Debug, Clone)]
pub struct ValueSieve {
    coeffs: Vec<i128>,
    x: u64,
    sieve_limit: u64,
    primes: Vec<u32>,
    /// Roots of prime `i` are `roots[offsets[i]..offsets[i + 1]]`.
    offsets: Vec<u32>,
    roots: Vec<u32>,
}

fn small_coeffs(poly: &Poly) -> Result<Vec<i128>> {
    poly.coeffs()
        .iter()
        .map(|c| c.to_i128())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::CapacityExceeded {
            what: "polynomial coefficients beyond 128 bits".into(),
            max_feasible: 0,
        })
}

/// Largest `X` whose value bound stays at or below `limit`.
fn max_feasible_x(poly: &Poly, limit: &BigInt) -> u64 {
    let (mut lo, mut hi) = (0u64, 1u64 << 62);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if &poly.value_bound(mid) <= limit {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Values must fit in a word and their square roots under the sieve cap.
fn value_limit(poly: &Poly, x: u64, what: &str) -> Result<u64> {
    let bound = poly.value_bound(x);
    let cap = BigInt::from(MAX_SIEVE_PRIME) * BigInt::from(MAX_SIEVE_PRIME);
    let cap = cap.min(BigInt::from(u64::MAX));
    if bound > cap {
        return Err(Error::CapacityExceeded {
            what: format!("{what} of {poly} up to X = {x}"),
            max_feasible: max_feasible_x(poly, &cap),
        });
    }
    Ok(bound.to_u64().expect("bounded above by u64::MAX"))
}

fn eval(coeffs: &[i128], n: u64) -> i128 {
    let n = n as i128;
    coeffs.iter().rev().fold(0i128, |acc, &c| acc * n + c)
}

/// Roots of `P` modulo each prime `<= limit`, in a flat layout. Primes that
/// divide every coefficient get all residues.
fn progressions(poly: &Poly, limit: u64) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let primes: Vec<u64> = primes_up_to(limit).collect();
    let per_prime: Vec<Vec<u32>> = primes
        .par_chunks(2048)
        .flat_map_iter(|chunk| {
            chunk.iter().map(|&p| match roots_mod_p(poly, p) {
                Ok(r) => r.into_iter().map(|r| r as u32).collect(),
                Err(_) => (0..p as u32).collect(),
            })
        })
        .collect();
    let mut offsets = Vec::with_capacity(primes.len() + 1);
    let mut roots = Vec::new();
    offsets.push(0);
    for r in per_prime {
        roots.extend(r);
        offsets.push(roots.len() as u32);
    }
    (primes.into_iter().map(|p| p as u32).collect(), offsets, roots)
}

impl ValueSieve {
    pub fn new(poly: &Poly, x: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::EmptyDomain("X must be at least 1".into()));
        }
        let coeffs = small_coeffs(poly)?;
        let bound = value_limit(poly, x, "factoring values")?;
        let sieve_limit = isqrt(bound);
        let (primes, offsets, roots) = progressions(poly, sieve_limit);
        Ok(ValueSieve {
            coeffs,
            x,
            sieve_limit,
            primes,
            offsets,
            roots,
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// Every listed prime factor is at most this.
    pub fn sieve_limit(&self) -> u64 {
        self.sieve_limit
    }

    pub fn block_count(&self) -> u64 {
        self.x.div_ceil(BLOCK_LEN)
    }

    /// Factorizations for `n` in block `b`, i.e. `b * BLOCK_LEN < n <= (b + 1) * BLOCK_LEN`.
    pub fn block(&self, b: u64) -> Vec<ValueFactorization> {
        let lo = b * BLOCK_LEN + 1;
        let hi = ((b + 1) * BLOCK_LEN).min(self.x);
        let len = (hi - lo + 1) as usize;
        let mut out: Vec<ValueFactorization> = (lo..=hi)
            .map(|n| {
                let v = eval(&self.coeffs, n);
                let value = v.unsigned_abs() as u64;
                ValueFactorization {
                    n,
                    value,
                    negative: v < 0,
                    factors: SmallVec::new(),
                    cofactor: value,
                }
            })
            .collect();
        for (i, &p) in self.primes.iter().enumerate() {
            let p = p as u64;
            let rs = &self.roots[self.offsets[i] as usize..self.offsets[i + 1] as usize];
            let lo_mod = lo % p;
            for &r in rs {
                let r = r as u64;
                let mut idx = ((r + p - lo_mod) % p) as usize;
                while idx < len {
                    let vf = &mut out[idx];
                    if vf.cofactor != 0 {
                        let mut e = 0;
                        while vf.cofactor.is_multiple_of(p) {
                            vf.cofactor /= p;
                            e += 1;
                        }
                        if e > 0 {
                            vf.factors.push((p, e));
                        }
                    }
                    idx += p as usize;
                }
            }
        }
        out
    }

    /// Applies `f` to every block, in parallel, and returns the results in
    /// block order.
    pub fn map_blocks<R: Send>(&self, f: impl Fn(&[ValueFactorization]) -> R + Sync) -> Vec<R> {
        let group = (rayon::current_num_threads() as u64 * 2).max(1);
        let mut out = Vec::with_capacity(self.block_count() as usize);
        let mut start = 0;
        while start < self.block_count() {
            let end = (start + group).min(self.block_count());
            out.par_extend(
                (start..end)
                    .into_par_iter()
                    .map(|b| f(&self.block(b)))
                    .collect::<Vec<_>>(),
            );
            start = end;
        }
        out
    }

    pub fn iter(&self) -> ValueStream<'_> {
        ValueStream {
            sieve: self,
            next_block: 0,
            current: Vec::new().into_iter(),
        }
    }
}

/// Factorizations in increasing `n`, one block at a time.
pub struct ValueStream<'a> {
    sieve: &'a ValueSieve,
    next_block: u64,
    current: std::vec::IntoIter<ValueFactorization>,
}

impl Iterator for ValueStream<'_> {
    type Item = ValueFactorization;

    fn next(&mut self) -> Option<ValueFactorization> {
        loop {
            if let Some(v) = self.current.next() {
                return Some(v);
            }
            if self.next_block >= self.sieve.block_count() {
                return None;
            }
            self.current = self.sieve.block(self.next_block).into_iter();
            self.next_block += 1;
        }
    }
}

/// Factorizations of `|P(n)|` for `1 <= n <= X`, in order.
pub fn factor_values(poly: &Poly, x: u64) -> Result<Vec<ValueFactorization>> {
    let sieve = ValueSieve::new(poly, x)?;
    Ok(sieve.iter().collect())
}

/// Partial sums of `|lambda(|P(n)|)|` with bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativeSum {
    pub series: SumSeries,
    /// `n` with `P(n) = 0`, left out of the sum.
    pub zero_count: u64,
    /// Values whose factorization did not multiply back to the value; any
    /// nonzero count is a bug.
    pub reconstruction_failures: u64,
}

/// `|lambda(m)|` from the factorization of `m`.
fn abs_lambda(
    provider: &EigenProvider,
    small: &[(u64, f64)],
    vf: &ValueFactorization,
) -> Result<f64> {
    let lookup = |p: u64| -> Result<f64> {
        match small.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(i) => Ok(small[i].1),
            Err(_) => provider.lambda_prime(p).map_err(|e| match e {
                Error::UnsupportedPrime { p, .. } => Error::UnsupportedPrime {
                    p,
                    at: Some((vf.n, vf.cofactor)),
                },
                e => e,
            }),
        }
    };
    let mut acc = 1.0;
    for &(p, e) in &vf.factors {
        let lp = lookup(p)?;
        let spec = provider.spec();
        acc *= crate::eigenvalues::lambda_prime_power(spec, p, lp, e)?;
        if acc == 0.0 {
            return Ok(0.0);
        }
    }
    if vf.cofactor > 1 {
        acc *= lookup(vf.cofactor)?;
    }
    Ok(acc.abs())
}

pub fn eval_multiplicative(poly: &Poly, x: u64, provider: &EigenProvider) -> Result<MultiplicativeSum> {
    let marks = checkpoints(x, DEFAULT_CHECKPOINT_START, DEFAULT_CHECKPOINT_RATIO)?;
    eval_multiplicative_at(poly, &marks, provider)
}

pub fn eval_multiplicative_at(poly: &Poly, marks: &[u64], provider: &EigenProvider) -> Result<MultiplicativeSum> {
    let x = *marks.last().ok_or_else(|| Error::EmptyDomain("no checkpoints".into()))?;
    let sieve = ValueSieve::new(poly, x)?;
    // eigenvalues at the sieving primes, computed once
    let small: Vec<(u64, f64)> = sieve
        .primes
        .par_iter()
        .filter_map(|&p| {
            let p = p as u64;
            provider.lambda_prime(p).ok().map(|l| (p, l))
        })
        .collect();
    let label = format!("|lambda[{}]({})|", provider.spec(), poly);
    let mut builder = SumSeriesBuilder::new(label, marks.to_vec());
    let mut zero_count = 0;
    let mut failures = 0;
    let blocks = sieve.map_blocks(|vals| -> Result<Vec<(u64, Option<f64>, bool)>> {
        vals.iter()
            .map(|vf| {
                let ok = vf.reconstructs() && (vf.cofactor <= 1 || vf.cofactor > sieve.sieve_limit || vf.factors.is_empty());
                if vf.is_zero() {
                    Ok((vf.n, None, ok))
                } else {
                    Ok((vf.n, Some(abs_lambda(provider, &small, vf)?), ok))
                }
            })
            .collect()
    });
    for block in blocks {
        for (n, term, ok) in block? {
            if !ok {
                failures += 1;
            }
            match term {
                Some(t) => builder.add(n, t),
                None => zero_count += 1,
            }
        }
    }
    Ok(MultiplicativeSum {
        series: builder.finish(),
        zero_count,
        reconstruction_failures: failures,
    })
}

/// Per-`n` outcome of the square screen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScreenVerdict {
    /// No `p <= B` has `p^2 | P(n)`; a larger square may still divide it.
    SquarefreeUpToB,
    /// `p^2 | P(n)` for this prime `p <= B`, the smallest such.
    HasSmallSquare { p: u64 },
    ZeroValue,
}

/// One-sided squarefree screen of `P(n)`, `1 <= n <= X`, by primes `<= B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeScreen {
    bound: u64,
    /// Smallest square witness per `n`; 0 for none, `u32::MAX` for `P(n) = 0`.
    witness: Vec<u32>,
}

const ZERO_MARK: u32 = u32::MAX;

impl SquarefreeScreen {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn x(&self) -> u64 {
        self.witness.len() as u64
    }

    pub fn verdict(&self, n: u64) -> ScreenVerdict {
        match self.witness[(n - 1) as usize] {
            0 => ScreenVerdict::SquarefreeUpToB,
            ZERO_MARK => ScreenVerdict::ZeroValue,
            p => ScreenVerdict::HasSmallSquare { p: p as u64 },
        }
    }

    pub fn passes(&self, n: u64) -> bool {
        self.witness[(n - 1) as usize] == 0
    }

    pub fn small_square_count(&self) -> u64 {
        self.witness.iter().filter(|&&w| w != 0 && w != ZERO_MARK).count() as u64
    }

    pub fn zero_count(&self) -> u64 {
        self.witness.iter().filter(|&&w| w == ZERO_MARK).count() as u64
    }
}

pub fn squarefree_screen(poly: &Poly, x: u64, b: u64) -> Result<SquarefreeScreen> {
    if b < 2 {
        return Err(Error::Domain(format!("screen bound {b} must be at least 2")));
    }
    if b >= ZERO_MARK as u64 {
        return Err(Error::CapacityExceeded {
            what: format!("screen bound {b}"),
            max_feasible: ZERO_MARK as u64 - 1,
        });
    }
    if x == 0 {
        return Err(Error::EmptyDomain("X must be at least 1".into()));
    }
    let coeffs = small_coeffs(poly)?;
    value_limit(poly, x, "screening values")?;
    let values: Vec<u64> = (1..=x).map(|n| eval(&coeffs, n).unsigned_abs() as u64).collect();
    let mut witness: Vec<u32> = values.iter().map(|&v| if v == 0 { ZERO_MARK } else { 0 }).collect();
    for p in primes_up_to(b) {
        let rs: Vec<u64> = roots_mod_p(poly, p).unwrap_or_else(|_| (0..p).collect());
        let Some(p2) = p.checked_mul(p) else { break };
        for r in rs {
            // n = r (mod p) with 1 <= n <= x
            let mut n = if r == 0 { p } else { r };
            while n <= x {
                let i = (n - 1) as usize;
                if witness[i] == 0 && values[i].is_multiple_of(p2) {
                    witness[i] = p as u32;
                }
                n += p;
            }
        }
    }
    Ok(SquarefreeScreen { bound: b, witness })
}
