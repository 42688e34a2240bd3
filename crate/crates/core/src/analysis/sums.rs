use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::eigenvalues::EigenProvider;
use crate::error::{Error, Result};
use crate::polyarith::RhoTable;

pub const DEFAULT_CHECKPOINT_START: u64 = 128;
pub const DEFAULT_CHECKPOINT_RATIO: f64 = 2.0;

/// Partial sums recorded at increasing cutoffs `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumSeries {
    pub label: String,
    pub checkpoints: Vec<(u64, f64)>,
}

impl SumSeries {
    pub fn last(&self) -> Option<(u64, f64)> {
        self.checkpoints.last().copied()
    }

    pub fn final_value(&self) -> f64 {
        self.last().map_or(0.0, |(_, v)| v)
    }

    /// Points with `lo <= x <= hi`.
    pub fn window(&self, lo: u64, hi: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.checkpoints
            .iter()
            .copied()
            .filter(move |&(x, _)| lo <= x && x <= hi)
    }
}

/// Cutoffs `start, start*ratio, ...` below `x_max`, then `x_max` itself.
pub fn checkpoints(x_max: u64, start: u64, ratio: f64) -> Result<Vec<u64>> {
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(Error::Domain(format!("checkpoint ratio {ratio} must exceed 1")));
    }
    let mut out = Vec::new();
    let mut c = start.max(1) as f64;
    while (c as u64) < x_max {
        let v = c.round() as u64;
        if out.last().is_none_or(|&l| v > l) {
            out.push(v);
        }
        c *= ratio;
    }
    out.push(x_max);
    Ok(out)
}

/// Compensated summation; the order of additions fully determines the result.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Accumulates terms indexed by increasing `n` and records the running sum
/// at each checkpoint.
#[derive(Debug, Clone)]
pub struct SumSeriesBuilder {
    label: String,
    marks: Vec<u64>,
    next: usize,
    acc: NeumaierSum,
    out: Vec<(u64, f64)>,
}

impl SumSeriesBuilder {
    pub fn new(label: impl Into<String>, marks: Vec<u64>) -> Self {
        SumSeriesBuilder {
            label: label.into(),
            marks,
            next: 0,
            acc: NeumaierSum::default(),
            out: Vec::new(),
        }
    }

    /// Emits every checkpoint below `n`; call before adding the term for `n`.
    pub fn advance_to(&mut self, n: u64) {
        while self.next < self.marks.len() && self.marks[self.next] < n {
            self.out.push((self.marks[self.next], self.acc.value()));
            self.next += 1;
        }
    }

    pub fn add(&mut self, n: u64, term: f64) {
        self.advance_to(n);
        self.acc.add(term);
    }

    pub fn finish(mut self) -> SumSeries {
        self.advance_to(u64::MAX);
        SumSeries {
            label: self.label,
            checkpoints: self.out,
        }
    }
}

/// Which prime sum to accumulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumKind {
    /// `(|lambda(p)| - 1) / p`
    S,
    /// `(lambda(p)^2 - 1) / p`
    T2,
    /// `(lambda(p)^4 - 2) / p`
    T4,
}

impl SumKind {
    pub fn term(self, lambda: f64, p: u64) -> f64 {
        let num = match self {
            SumKind::S => lambda.abs() - 1.0,
            SumKind::T2 => lambda * lambda - 1.0,
            SumKind::T4 => {
                let l2 = lambda * lambda;
                l2 * l2 - 2.0
            }
        };
        num / p as f64
    }
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::S => "S",
            SumKind::T2 => "T2",
            SumKind::T4 => "T4",
        })
    }
}

impl FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S" => Ok(SumKind::S),
            "T2" => Ok(SumKind::T2),
            "T4" => Ok(SumKind::T4),
            _ => Err(Error::Domain(format!("unknown sum kind `{s}` (S, T2, T4)"))),
        }
    }
}

/// Checkpointed `sum_{p <= X, unramified} term(lambda(p), p)`.
pub fn prime_sum(provider: &EigenProvider, kind: SumKind, x: u64) -> Result<SumSeries> {
    prime_sum_at(provider, kind, &checkpoints(x, DEFAULT_CHECKPOINT_START, DEFAULT_CHECKPOINT_RATIO)?)
}

pub fn prime_sum_at(provider: &EigenProvider, kind: SumKind, marks: &[u64]) -> Result<SumSeries> {
    let x = *marks.last().ok_or_else(|| Error::EmptyDomain("no checkpoints".into()))?;
    check_reach(provider, x)?;
    let mut b = SumSeriesBuilder::new(format!("{kind}[{}]", provider.spec()), marks.to_vec());
    for p in primes_up_to(x) {
        if provider.is_ramified(p) {
            continue;
        }
        b.add(p, kind.term(provider.lambda_prime(p)?, p));
    }
    Ok(b.finish())
}

/// Checkpointed `sum_{p <= X} rho(p) (|lambda(p)| - 1) / p` over primes that
/// are neither ramified for the form nor degenerate for the polynomial.
pub fn weighted_prime_sum(provider: &EigenProvider, rho: &RhoTable, x: u64) -> Result<SumSeries> {
    weighted_prime_sum_at(provider, rho, &checkpoints(x, DEFAULT_CHECKPOINT_START, DEFAULT_CHECKPOINT_RATIO)?)
}

pub fn weighted_prime_sum_at(provider: &EigenProvider, rho: &RhoTable, marks: &[u64]) -> Result<SumSeries> {
    let x = *marks.last().ok_or_else(|| Error::EmptyDomain("no checkpoints".into()))?;
    check_reach(provider, x)?;
    if rho.p_max() < x {
        return Err(Error::IncompleteTable {
            missing: primes_up_to(x)
                .skip_while(|&p| p <= rho.p_max())
                .take(MISSING_LIST_CAP)
                .collect(),
        });
    }
    let label = format!("rho[{}]*S[{}]", rho.poly(), provider.spec());
    let mut b = SumSeriesBuilder::new(label, marks.to_vec());
    for &(p, r) in rho.entries() {
        if p > x {
            break;
        }
        if provider.is_ramified(p) {
            continue;
        }
        b.add(p, r as f64 * SumKind::S.term(provider.lambda_prime(p)?, p));
    }
    Ok(b.finish())
}

/// Longest list of missing primes carried by an `IncompleteTable` error.
pub(crate) const MISSING_LIST_CAP: usize = 64;

fn check_reach(provider: &EigenProvider, x: u64) -> Result<()> {
    match provider.prime_limit() {
        Some(limit) if limit < x => Err(Error::UnsupportedPrime {
            p: primes_up_to(x).find(|&p| p > limit).unwrap_or(x),
            at: None,
        }),
        _ => Ok(()),
    }
}
