//! Finite-group side: characters of dihedral groups, Frobenius cycle-type
//! statistics, ideal counts in quadratic fields and real character sums over
//! primes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_integer::Integer;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{checkpoints, SumSeries, SumSeriesBuilder, DEFAULT_CHECKPOINT_RATIO, DEFAULT_CHECKPOINT_START};
use crate::arith::{is_prime, kronecker, primes_up_to, segmented_primes};
use crate::eigenvalues::{is_fundamental_discriminant, DirichletChar};
use crate::error::{Error, Result};
use crate::factorsieve::{squarefree_screen, ValueSieve, BLOCK_LEN};
use crate::polyarith::{factor_pattern, Poly};

/// The 2-dimensional representation of `D_{2n}` sending the rotation `r` to
/// rotation by `2 pi a / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralSpec {
    pub n: u64,
    pub a: u64,
}

impl DihedralSpec {
    pub fn new(n: u64, a: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("D_2n needs n >= 3, got {n}")));
        }
        if a == 0 || 2 * a >= n {
            return Err(Error::Domain(format!(
                "irrep index {a} for n = {n} must satisfy 1 <= a < n/2"
            )));
        }
        Ok(DihedralSpec { n, a })
    }

    /// Every valid `a` for this `n`.
    pub fn all(n: u64) -> Result<Vec<Self>> {
        (1..n.div_ceil(2)).map(|a| DihedralSpec::new(n, a)).collect()
    }

    pub fn group_order(&self) -> u64 {
        2 * self.n
    }

    /// `chi(r^j) = 2 cos(2 pi a j / n)`; reflections have character 0.
    pub fn rotation_character(&self, j: u64) -> f64 {
        let k = (self.a * j) % self.n;
        2.0 * (2.0 * PI * k as f64 / self.n as f64).cos()
    }

    /// Order of `r^a`; the character values are integers exactly when it is
    /// 1, 2, 3, 4 or 6.
    fn image_order(&self) -> u64 {
        self.n / self.a.gcd(&self.n)
    }
}

fn check_power(power: u32) -> Result<()> {
    if power == 1 || power == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("power must be 1 or 2, got {power}")))
    }
}

/// `(1/2n) sum_g |chi(g)|^power` in floating point.
pub fn dihedral_char_average(spec: DihedralSpec, power: u32) -> Result<f64> {
    check_power(power)?;
    let spec = DihedralSpec::new(spec.n, spec.a)?;
    let total: f64 = (0..spec.n).map(|j| spec.rotation_character(j).abs().powi(power as i32)).sum();
    Ok(total / spec.group_order() as f64)
}

fn euler_phi(mut m: u64) -> u64 {
    let mut out = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn mobius(mut m: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Exact rational average, when it is rational.
///
/// Power 2: `chi(r^j)^2 = 2 + z^{2aj} + z^{-2aj}` with `z` a primitive `n`-th
/// root of unity, and a rational combination of powers of `z` equals its own
/// trace average. Each `z^k` contributes `mu(m) / phi(m)` with
/// `m = n / gcd(k, n)`.
///
/// Power 1: rational exactly when all character values are integers.
pub fn dihedral_char_average_exact(spec: DihedralSpec, power: u32) -> Result<Option<Rational64>> {
    check_power(power)?;
    let spec = DihedralSpec::new(spec.n, spec.a)?;
    let n = spec.n;
    let order = Rational64::from_integer(spec.group_order() as i64);
    if power == 2 {
        let mut coeff = vec![0i64; n as usize];
        for j in 0..n {
            let k = (2 * spec.a * j) % n;
            coeff[0] += 2;
            coeff[k as usize] += 1;
            coeff[((n - k) % n) as usize] += 1;
        }
        let mut total = Rational64::from_integer(0);
        for (k, &c) in coeff.iter().enumerate() {
            if c != 0 {
                let m = n / (k as u64).gcd(&n);
                total += Rational64::new(c * mobius(m), euler_phi(m) as i64);
            }
        }
        return Ok(Some(total / order));
    }
    if !matches!(spec.image_order(), 1 | 2 | 3 | 4 | 6) {
        return Ok(None);
    }
    let total: i64 = (0..n).map(|j| spec.rotation_character(j).round().abs() as i64).sum();
    Ok(Some(Rational64::from_integer(total) / order))
}

/// Frequencies of Frobenius cycle types of `P` over unramified `p <= X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFrequencies {
    pub poly: Poly,
    pub x: u64,
    /// Count per pattern key, e.g. `"1;2"`.
    pub counts: BTreeMap<String, u64>,
    pub sample_size: u64,
    /// Primes left out because they divide the discriminant or leading
    /// coefficient.
    pub ramified: u64,
}

impl ClassFrequencies {
    pub fn frequency(&self, key: &str) -> f64 {
        self.counts.get(key).copied().unwrap_or(0) as f64 / self.sample_size.max(1) as f64
    }

    /// `(pattern, frequency, count)` rows in key order.
    pub fn rows(&self) -> Vec<(String, f64, u64)> {
        self.counts.iter().map(|(k, &c)| (k.clone(), self.frequency(k), c)).collect()
    }

    pub fn compare(&self, expected: &BTreeMap<String, f64>) -> Vec<DensityComparison> {
        let mut keys: Vec<&String> = expected.keys().chain(self.counts.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let e = expected.get(k).copied().unwrap_or(0.0);
                let o = self.frequency(k);
                DensityComparison {
                    pattern: k.clone(),
                    expected: e,
                    observed: o,
                    deviation: o - e,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityComparison {
    pub pattern: String,
    pub expected: f64,
    pub observed: f64,
    pub deviation: f64,
}

/// Chebotarev densities for polynomials whose Galois group is known.
pub fn known_densities(poly: &Poly) -> Option<BTreeMap<String, f64>> {
    let table: &[(&str, &[(&str, f64)])] = &[
        ("x", &[("1", 1.0)]),
        ("x^2 + 1", &[("1;1", 0.5), ("2", 0.5)]),
        ("x^3 - 2", &[("1;1;1", 1.0 / 6.0), ("1;2", 0.5), ("3", 1.0 / 3.0)]),
        // S_3, discriminant -31
        ("x^3 + x + 1", &[("1;1;1", 1.0 / 6.0), ("1;2", 0.5), ("3", 1.0 / 3.0)]),
        // Klein four-group
        ("x^4 + 1", &[("1;1;1;1", 0.25), ("2;2", 0.75)]),
    ];
    let text = poly.to_string();
    table
        .iter()
        .find(|(p, _)| *p == text)
        .map(|(_, d)| d.iter().map(|&(k, v)| (k.to_string(), v)).collect())
}

pub fn chebotarev_stats(poly: &Poly, x: u64) -> Result<ClassFrequencies> {
    if x < 100 {
        return Err(Error::Domain(format!("X = {x} must be at least 100")));
    }
    let primes = segmented_primes(x)?.into_vec();
    let (counts, ramified) = primes
        .par_chunks(4096)
        .map(|chunk| -> Result<(BTreeMap<String, u64>, u64)> {
            let mut counts = BTreeMap::new();
            let mut ramified = 0;
            for &p in chunk {
                match factor_pattern(poly, p) {
                    Ok(pat) => *counts.entry(pat.key()).or_insert(0) += 1,
                    Err(Error::RamifiedPrime(_)) => ramified += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok((counts, ramified))
        })
        .try_reduce(
            || (BTreeMap::new(), 0),
            |(mut a, ra), (b, rb)| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                Ok((a, ra + rb))
            },
        )?;
    Ok(ClassFrequencies {
        poly: poly.clone(),
        x,
        sample_size: counts.values().sum(),
        counts,
        ramified,
    })
}

fn check_discriminant(d: i64) -> Result<()> {
    if d != 1 && is_fundamental_discriminant(d) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{d} is not a fundamental discriminant of a quadratic field")))
    }
}

/// `sum_{m | n} kronecker(d, m)` from the factorization of `n`.
pub fn ideal_count_from_factors(d: i64, factors: &[(u64, u32)]) -> u64 {
    factors
        .iter()
        .map(|&(p, e)| match kronecker(d, p) {
            1 => e as u64 + 1,
            -1 => (e % 2 == 0) as u64,
            _ => 1,
        })
        .product()
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        if is_prime(n) {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of ideals of norm `n` in the ring of integers of `Q(sqrt d)`.
#[allow(non_snake_case)]
pub fn ideal_count_rF(d: i64, n: u64) -> Result<u64> {
    check_discriminant(d)?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(ideal_count_from_factors(d, &factorize(n)))
}

/// Checkpointed `sum_{p <= X} chi(p)` for a nontrivial real character.
pub fn char_prime_sum(chi: DirichletChar, x: u64) -> Result<SumSeries> {
    chi.validate()?;
    if chi.is_trivial() {
        return Err(Error::Domain("the trivial character sums to pi(X)".into()));
    }
    if x < 2 {
        return Err(Error::EmptyDomain(format!("no primes up to {x}")));
    }
    let marks = checkpoints(x, DEFAULT_CHECKPOINT_START, DEFAULT_CHECKPOINT_RATIO)?;
    let mut b = SumSeriesBuilder::new(format!("chi[{chi}]"), marks);
    for p in primes_up_to(x) {
        b.add(p, chi.value(p) as f64);
    }
    Ok(b.finish())
}

/// `|sum| / (X / log X)` at the last checkpoint.
pub fn equidistribution_ratio(series: &SumSeries) -> f64 {
    match series.last() {
        Some((x, v)) if x >= 2 => v.abs() / (x as f64 / (x as f64).ln()),
        _ => f64::NAN,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoncuspidalReport {
    pub x: u64,
    pub d: i64,
    pub screen_bound: u64,
    /// `sum` of ideal counts over the `n` passing the screen.
    pub total: u64,
    pub passed: u64,
    pub screened_out: u64,
    pub zero_values: u64,
}

impl NoncuspidalReport {
    pub fn value(&self) -> f64 {
        self.total as f64
    }
}

/// `sum_{n <= X, P(n) passes the B-screen} r_F(|P(n)|)` with `F = Q(sqrt d)`.
pub fn noncuspidal_lower_bound(poly: &Poly, d: i64, x: u64, b: u64) -> Result<NoncuspidalReport> {
    check_discriminant(d)?;
    let screen = squarefree_screen(poly, x, b)?;
    let sieve = ValueSieve::new(poly, x)?;
    let per_block = sieve.map_blocks(|vals| {
        vals.iter()
            .filter(|vf| screen.passes(vf.n))
            .map(|vf| {
                let mut r = ideal_count_from_factors(d, &vf.factors);
                if vf.cofactor > 1 {
                    r *= ideal_count_from_factors(d, &[(vf.cofactor, 1)]);
                }
                r
            })
            .fold((0u64, 0u64), |(s, c), r| (s + r, c + 1))
    });
    debug_assert!(per_block.len() as u64 == x.div_ceil(BLOCK_LEN));
    let (total, passed) = per_block.into_iter().fold((0, 0), |(s, c), (t, k)| (s + t, c + k));
    let zero_values = screen.zero_count();
    Ok(NoncuspidalReport {
        x,
        d,
        screen_bound: b,
        total,
        passed,
        screened_out: x - passed - zero_values,
        zero_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn poly(t: &str) -> Poly {
        t.parse().unwrap()
    }

    #[test]
    fn dihedral_examples() {
        let s3 = DihedralSpec::new(3, 1).unwrap();
        assert!((dihedral_char_average(s3, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(dihedral_char_average_exact(s3, 1).unwrap(), Some(Rational64::new(2, 3)));
        assert_eq!(dihedral_char_average_exact(s3, 2).unwrap(), Some(Rational64::from_integer(1)));
        let d8 = DihedralSpec::new(4, 1).unwrap();
        assert_eq!(dihedral_char_average_exact(d8, 1).unwrap(), Some(Rational64::new(1, 2)));
        assert!((dihedral_char_average(d8, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(dihedral_char_average_exact(DihedralSpec { n: 5, a: 1 }, 1).unwrap(), None);
        for (n, a) in [(2, 1), (4, 2), (6, 3), (5, 0), (5, 3)] {
            assert!(DihedralSpec::new(n, a).is_err(), "{n} {a}");
        }
        assert!(dihedral_char_average(DihedralSpec { n: 4, a: 2 }, 1).is_err());
        assert!(dihedral_char_average(s3, 3).is_err());
    }

    #[test]
    fn dihedral_orthogonality_and_strict_l1() {
        for n in 3..=50 {
            for spec in DihedralSpec::all(n).unwrap() {
                assert_eq!(dihedral_char_average_exact(spec, 2).unwrap(), Some(Rational64::from_integer(1)));
                assert!((dihedral_char_average(spec, 2).unwrap() - 1.0).abs() < 1e-12);
                let l1 = dihedral_char_average(spec, 1).unwrap();
                assert!(l1 < 1.0 - 1e-3, "{spec:?}: {l1}");
                if let Some(q) = dihedral_char_average_exact(spec, 1).unwrap() {
                    assert!((l1 - *q.numer() as f64 / *q.denom() as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn reducible_index_and_helpers() {
        // a = n/2 splits into two characters, so the L2 average is 2
        let spec = DihedralSpec { n: 6, a: 3 };
        let direct: f64 = (0..6).map(|j| spec.rotation_character(j).powi(2)).sum::<f64>() / 12.0;
        assert!((direct - 2.0).abs() < 1e-12);
        assert_eq!(euler_phi(12), 4);
        assert_eq!((mobius(1), mobius(6), mobius(12), mobius(7)), (1, 1, 0, -1));
    }

    #[test]
    fn chebotarev_small() {
        let f = chebotarev_stats(&poly("x"), 1000).unwrap();
        assert_eq!(f.frequency("1"), 1.0);
        assert_eq!(f.ramified, 0);
        let f = chebotarev_stats(&poly("x^2 + 1"), 1_000_000).unwrap();
        assert!((f.frequency("1;1") - 0.5).abs() < 0.01);
        assert!((f.frequency("2") - 0.5).abs() < 0.01);
        assert_eq!(f.ramified, 1);
        for c in f.compare(&known_densities(&poly("x^2 + 1")).unwrap()) {
            assert!(c.deviation.abs() < 0.01);
        }
        assert!(chebotarev_stats(&poly("x"), 99).is_err());
    }

    #[test]
    fn chebotarev_patterns_are_consistent() {
        for text in ["x^3 - 2", "x^3 + x + 1", "x^4 + 1", "x^4 - 2"] {
            let p = poly(text);
            let f = chebotarev_stats(&p, 20_000).unwrap();
            let total: f64 = f.rows().iter().map(|r| r.1).sum();
            assert!((total - 1.0).abs() < 1e-9);
            for key in f.counts.keys() {
                let deg: u32 = key.split(';').map(|d| d.parse::<u32>().unwrap()).sum();
                assert_eq!(deg as usize, p.degree());
            }
            if let Some(exp) = known_densities(&p) {
                for c in f.compare(&exp) {
                    assert!(c.deviation.abs() < 0.03, "{text}: {c:?}");
                }
            }
        }
    }

    #[test]
    fn ideal_count_examples() {
        assert_eq!(ideal_count_rF(-4, 25).unwrap(), 3);
        assert_eq!(ideal_count_rF(-4, 3).unwrap(), 0);
        assert_eq!(ideal_count_rF(-4, 2).unwrap(), 1);
        assert_eq!(ideal_count_rF(-4, 1).unwrap(), 1);
        assert!(ideal_count_rF(-3, 0).is_err());
        assert!(ideal_count_rF(-12, 5).is_err());
        for n in 1..=10_000 {
            assert_eq!(ideal_count_rF(-4, n).unwrap(), oracle::gaussian_ideal_count(n), "n = {n}");
        }
    }

    #[test]
    fn ideal_count_against_divisor_convolution() {
        for d in [-3i64, 5, -7, 8, 12, -20] {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            for n in 1..=2000u64 {
                let direct: i64 = (1..=n).filter(|m| n % m == 0).map(|m| kronecker(d, m) as i64).sum();
                assert_eq!(ideal_count_rF(d, n).unwrap() as i64, direct, "d = {d}, n = {n}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ideal_count_is_multiplicative(m in 1u64..200_000, n in 1u64..200_000, which in 0usize..4) {
            prop_assume!(m.gcd(&n) == 1);
            let d = [-4i64, -3, 5, -8][which];
            prop_assert_eq!(
                ideal_count_rF(d, m * n).unwrap(),
                ideal_count_rF(d, m).unwrap() * ideal_count_rF(d, n).unwrap()
            );
        }
    }

    #[test]
    fn char_sums() {
        let chi = DirichletChar::Kronecker(-4);
        let s = char_prime_sum(chi, 100).unwrap();
        let want: i64 = oracle::trial_division_primes(100)
            .iter()
            .map(|&p| match p % 4 {
                1 => 1,
                3 => -1,
                _ => 0,
            })
            .sum();
        assert_eq!(s.final_value(), want as f64);
        assert_eq!(want, -2);
        assert!(char_prime_sum(chi, 100_000).unwrap().final_value().abs() <= 50.0);
        assert_eq!(char_prime_sum(DirichletChar::Kronecker(5), 2).unwrap().final_value(), -1.0);
        assert_eq!(char_prime_sum(chi, 2).unwrap().final_value(), 0.0);
        assert!(char_prime_sum(DirichletChar::Trivial, 100).is_err());
        let r = equidistribution_ratio(&char_prime_sum(chi, 100_000).unwrap());
        assert!(r < 0.01);
    }

    #[test]
    fn noncuspidal_examples() {
        let r = noncuspidal_lower_bound(&poly("x^2 + 1"), -4, 10, 7).unwrap();
        let want: u64 = (1..=10u64).filter(|&n| n != 7).map(|n| oracle::gaussian_ideal_count(n * n + 1)).sum();
        assert_eq!(r.total, want);
        assert_eq!(r.total, 19);
        assert_eq!((r.passed, r.screened_out), (9, 1));
        let r = noncuspidal_lower_bound(&poly("x"), -4, 5, 2).unwrap();
        assert_eq!(r.total, 4);
        let r = noncuspidal_lower_bound(&poly("4x^2"), -4, 50, 2).unwrap();
        assert_eq!((r.total, r.passed), (0, 0));
        let r = noncuspidal_lower_bound(&poly("x^2 - 4"), -4, 5, 3).unwrap();
        assert_eq!(r.zero_values, 1);
    }

    #[test]
    fn noncuspidal_matches_brute_force() {
        let p = poly("x^2 + x + 1");
        let r = noncuspidal_lower_bound(&p, -3, 3000, 100).unwrap();
        let want: u64 = (1..=3000u64)
            .map(|n| n * n + n + 1)
            .filter(|&v| oracle::trial_factor(v).iter().all(|&(q, e)| q > 100 || e < 2))
            .map(|v| ideal_count_rF(-3, v).unwrap())
            .sum();
        assert_eq!(r.total, want);
    }
}
