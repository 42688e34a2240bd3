use crate::error::{Error, Result};

use super::modular::isqrt;

/// Number of odd integers covered by one sieve segment.
pub const SEGMENT_LEN: usize = 1 << 20;

/// All primes up to `limit`, in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeStream {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeStream {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.primes.iter()
    }

    /// Prime counting function `pi(x)` for `x <= limit`.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.primes
    }
}

impl<'a> IntoIterator for &'a PrimeStream {
    type Item = &'a u64;
    type IntoIter = std::slice::Iter<'a, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.primes.iter()
    }
}

/// Collects every prime `<= limit` with the segmented sieve.
pub fn segmented_primes(limit: u64) -> Result<PrimeStream> {
    if limit < 2 {
        return Err(Error::EmptyDomain(format!(
            "no primes below {limit}; limit must be at least 2"
        )));
    }
    let approx = (limit as f64 / (limit as f64).ln() * 1.2) as usize + 16;
    let mut primes = Vec::with_capacity(approx);
    primes.extend(primes_up_to(limit));
    Ok(PrimeStream { limit, primes })
}

/// Streaming iterator over the primes `<= limit`; holds one segment at a time.
pub fn primes_up_to(limit: u64) -> SegmentedPrimes {
    SegmentedPrimes::new(limit)
}

pub struct SegmentedPrimes {
    limit: u64,
    emitted_two: bool,
    /// Odd base primes up to sqrt(limit) and the next odd multiple to strike.
    base: Vec<(u64, u64)>,
    /// First odd number of the next segment.
    next_lo: u64,
    segment: Vec<bool>,
    buffer: Vec<u64>,
    pos: usize,
}

impl SegmentedPrimes {
    fn new(limit: u64) -> Self {
        let root = isqrt(limit);
        let base = small_odd_primes(root)
            .into_iter()
            .map(|p| (p, p * p))
            .collect();
        SegmentedPrimes {
            limit,
            emitted_two: limit < 2,
            base,
            next_lo: 3,
            segment: vec![false; SEGMENT_LEN],
            buffer: Vec::new(),
            pos: 0,
        }
    }

    fn fill(&mut self) -> bool {
        while self.next_lo <= self.limit {
            let lo = self.next_lo;
            let span = ((self.limit - lo) / 2 + 1).min(SEGMENT_LEN as u64) as usize;
            let hi = lo + 2 * span as u64; // exclusive
            let seg = &mut self.segment[..span];
            seg.fill(true);
            for (p, next) in self.base.iter_mut() {
                if *next >= hi {
                    continue;
                }
                let mut m = *next;
                while m < hi {
                    seg[((m - lo) / 2) as usize] = false;
                    m += 2 * *p;
                }
                *next = m;
            }
            self.buffer.clear();
            self.buffer.extend(
                seg.iter()
                    .enumerate()
                    .filter(|(_, &is_p)| is_p)
                    .map(|(i, _)| lo + 2 * i as u64),
            );
            self.pos = 0;
            self.next_lo = hi;
            if !self.buffer.is_empty() {
                return true;
            }
        }
        false
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.emitted_two {
            self.emitted_two = true;
            return Some(2);
        }
        if self.pos >= self.buffer.len() && !self.fill() {
            return None;
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Odd primes up to `n` by a plain sieve; only used for the base primes.
fn small_odd_primes(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn small_limits() {
        assert_eq!(segmented_primes(10).unwrap().into_vec(), vec![2, 3, 5, 7]);
        assert_eq!(segmented_primes(2).unwrap().into_vec(), vec![2]);
        assert_eq!(segmented_primes(3).unwrap().into_vec(), vec![2, 3]);
        assert!(matches!(segmented_primes(1), Err(Error::EmptyDomain(_))));
        assert_eq!(primes_up_to(1).count(), 0);
    }

    #[test]
    fn hundred_matches_trial_division() {
        let s = segmented_primes(100).unwrap();
        assert_eq!(s.len(), 25);
        assert_eq!(s.as_slice(), oracle::trial_division_primes(100).as_slice());
    }

    #[test]
    fn million_matches_plain_sieve() {
        let s = segmented_primes(1_000_000).unwrap();
        assert_eq!(s.len(), 78_498);
        assert_eq!(s.as_slice(), oracle::eratosthenes(1_000_000).as_slice());
    }

    #[test]
    fn crosses_segment_boundaries() {
        // three full segments plus a ragged tail
        let limit = 6 * SEGMENT_LEN as u64 + 12_345;
        let s = segmented_primes(limit).unwrap();
        let direct = oracle::eratosthenes(limit);
        assert_eq!(s.as_slice(), direct.as_slice());
        assert_eq!(s.count_up_to(1000), 168);
    }
}
