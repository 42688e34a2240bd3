use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::form::{DirichletChar, FormSpec};
use super::local::{cm_trace, raw_prime_power};
use super::raw::RawCoeffs;
use super::series::{ntt_len_for, reconstruct_all, reduce_i128, Ntt, NTT_PRIMES};

/// Default cap on the number of series coefficients for level-1 tables.
pub const SERIES_BUDGET: usize = 10_000_000;

/// Normalized eigenvalues `lambda(n)` for `1 <= n <= n_max`, with the exact
/// unnormalized coefficients where those are integers of growing size.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTable {
    spec: FormSpec,
    n_max: usize,
    /// `lambda[n]`; index 0 is unused.
    lambda: Vec<f64>,
    raw: Option<RawCoeffs>,
}

impl EigenTable {
    pub(crate) fn from_parts(
        spec: FormSpec,
        lambda: Vec<f64>,
        raw: Option<RawCoeffs>,
    ) -> Self {
        let n_max = lambda.len() - 1;
        if let Some(r) = &raw {
            assert_eq!(r.len(), n_max);
        }
        EigenTable {
            spec,
            n_max,
            lambda,
            raw,
        }
    }

    pub fn spec(&self) -> &FormSpec {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.lambda[n]
    }

    /// `lambda(1..=n_max)` as a slice starting at `n = 1`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambda[1..]
    }

    pub fn raw(&self) -> Option<&RawCoeffs> {
        self.raw.as_ref()
    }

    pub fn raw_bigint(&self, n: usize) -> Option<BigInt> {
        self.raw.as_ref().map(|r| r.get_bigint(n))
    }

    /// `n^{(k-1)/2}` for the table's weight.
    pub fn normalizer(&self, n: usize) -> f64 {
        normalizer(self.spec.twice_weight_shift(), n)
    }
}

fn normalizer(twice_shift: u32, n: usize) -> f64 {
    let x = n as f64;
    let whole = x.powi((twice_shift / 2) as i32);
    if twice_shift % 2 == 1 {
        whole * x.sqrt()
    } else {
        whole
    }
}

/// Builds the eigenvalue table of `spec` up to `n_max` with the default
/// series budget.
pub fn build_table(spec: FormSpec, n_max: usize) -> Result<EigenTable> {
    build_table_with_budget(spec, n_max, SERIES_BUDGET)
}

pub fn build_table_with_budget(spec: FormSpec, n_max: usize, budget: usize) -> Result<EigenTable> {
    spec.validate()?;
    if n_max == 0 {
        return Err(Error::EmptyDomain("n_max must be at least 1".into()));
    }
    match spec {
        FormSpec::Level1Holomorphic { weight } => {
            if n_max > budget {
                return Err(Error::CapacityExceeded {
                    what: format!("level-1 table of length {n_max}"),
                    max_feasible: budget as u64,
                });
            }
            level1_table(weight, n_max)
        }
        FormSpec::CMGaussian => Ok(cm_table(n_max)),
        FormSpec::Isobaric { .. } | FormSpec::TrivialQuadratic { .. } => {
            let (a, b) = spec.characters().expect("noncuspidal spec");
            Ok(convolution_table(spec, a, b, n_max))
        }
    }
}

/// Coefficients of `prod (1 - q^m)^6` below `q^len`, as the square of Jacobi's
/// sparse expansion `prod (1 - q^m)^3 = sum (-1)^j (2j + 1) q^{j(j+1)/2}`.
fn eta_sixth(len: usize) -> Vec<i64> {
    let terms: Vec<(usize, i64)> = (0i64..)
        .map(|j| ((j * (j + 1) / 2) as usize, if j % 2 == 0 { 2 * j + 1 } else { -(2 * j + 1) }))
        .take_while(|&(e, _)| e < len)
        .collect();
    let mut out = vec![0i64; len];
    for &(e1, c1) in &terms {
        for &(e2, c2) in &terms {
            if e1 + e2 >= len {
                break;
            }
            out[e1 + e2] += c1 * c2;
        }
    }
    out
}

/// `sigma_k(n)` for `n < len`, exactly.
fn divisor_power_sums(k: u32, len: usize) -> Vec<u128> {
    let mut s = vec![0u128; len];
    for d in 1..len {
        let dk = (d as u128).pow(k);
        for m in (d..len).step_by(d) {
            s[m] += dk;
        }
    }
    s
}

/// `(E4 exponent, E6 exponent)` with `Delta * E4^a * E6^b` the weight-k eigenform.
fn eisenstein_shift(weight: u32) -> (u32, u32) {
    match weight {
        12 => (0, 0),
        16 => (1, 0),
        18 => (0, 1),
        20 => (2, 0),
        22 => (1, 1),
        26 => (2, 1),
        _ => unreachable!("weight validated"),
    }
}

fn level1_table(weight: u32, n_max: usize) -> Result<EigenTable> {
    let n = n_max;
    let len = ntt_len_for(n.max(2))?;
    // |a(n)| <= d(n) n^{(k-1)/2} <= 2 n^{k/2}; one extra bit for the sign
    let bits = 2.0 + (weight as f64 / 2.0) * (n as f64).log2().max(1.0);
    let prime_count = ((bits + 1.0) / 61.0).ceil() as usize;
    if prime_count > NTT_PRIMES.len() {
        return Err(Error::CapacityExceeded {
            what: format!("weight {weight} coefficients up to {n} need {prime_count} moduli"),
            max_feasible: 0,
        });
    }
    let width = ((bits + 1.0) / 64.0).ceil() as usize;
    let (e4_pow, e6_pow) = eisenstein_shift(weight);
    let sixth = eta_sixth(n);
    let sigma3 = (e4_pow > 0).then(|| divisor_power_sums(3, n));
    let sigma5 = (e6_pow > 0).then(|| divisor_power_sums(5, n));

    let mut residues = Vec::with_capacity(prime_count);
    for &(p, g) in &NTT_PRIMES[..prime_count] {
        let ntt = Ntt::new(p, g, len);
        let p = ntt.modulus();
        let base: Vec<u64> = sixth.iter().map(|&c| reduce_i128(c as i128, p)).collect();
        let twelfth = ntt.square_truncated(&base, n);
        drop(base);
        // coefficient i is a(i + 1): Delta = q prod (1 - q^m)^24
        let mut acc = ntt.square_truncated(&twelfth, n);
        drop(twelfth);
        if let Some(s3) = &sigma3 {
            let e4: Vec<u64> = s3
                .iter()
                .enumerate()
                .map(|(i, &s)| if i == 0 { 1 } else { ((240 * (s % p as u128)) % p as u128) as u64 })
                .collect();
            for _ in 0..e4_pow {
                acc = ntt.multiply_truncated(&acc, &e4, n);
            }
        }
        if let Some(s5) = &sigma5 {
            let e6: Vec<u64> = s5
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    if i == 0 {
                        1
                    } else {
                        let t = ((504 * (s % p as u128)) % p as u128) as u64;
                        (p - t) % p
                    }
                })
                .collect();
            for _ in 0..e6_pow {
                acc = ntt.multiply_truncated(&acc, &e6, n);
            }
        }
        residues.push(acc);
    }
    drop(sixth);
    let raw = reconstruct_all(&residues, width);
    drop(residues);
    let shift = weight - 1;
    let mut lambda = vec![0f64; n + 1];
    for (i, l) in lambda.iter_mut().enumerate().skip(1) {
        *l = raw.to_f64(i) / normalizer(shift, i);
    }
    Ok(EigenTable::from_parts(
        FormSpec::Level1Holomorphic { weight },
        lambda,
        Some(raw),
    ))
}

/// Smallest prime factor of every `n <= limit` (0 and 1 map to 0).
pub(crate) fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si || i * p as usize > limit {
                break;
            }
            spf[i * p as usize] = p;
        }
    }
    spf
}

fn cm_table(n_max: usize) -> EigenTable {
    let spf = smallest_prime_factors(n_max);
    let mut raw = vec![0i128; n_max + 1];
    raw[1] = 1;
    for n in 2..=n_max {
        let p = spf[n] as usize;
        if p == n {
            raw[n] = cm_trace(p as u64) as i128;
            continue;
        }
        let mut m = n;
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        let pe = if p == 2 {
            0
        } else {
            raw_prime_power(raw[p], p as u64, e, 1)
        };
        raw[n] = pe * raw[m];
    }
    let mut lambda = vec![0f64; n_max + 1];
    for n in 1..=n_max {
        lambda[n] = raw[n] as f64 / (n as f64).sqrt();
    }
    let packed = RawCoeffs::from_i128(&raw[1..]);
    EigenTable::from_parts(FormSpec::CMGaussian, lambda, Some(packed))
}

/// `lambda = psi1 * psi2` as a Dirichlet convolution.
fn convolution_table(
    spec: FormSpec,
    psi1: DirichletChar,
    psi2: DirichletChar,
    n_max: usize,
) -> EigenTable {
    let chi = |c: DirichletChar| -> Vec<i8> {
        (0..=n_max as u64)
            .map(|n| if n == 0 { 0 } else { c.value(n) as i8 })
            .collect()
    };
    let a = chi(psi1);
    let b = chi(psi2);
    let mut acc = vec![0i32; n_max + 1];
    for d in 1..=n_max {
        let ad = a[d] as i32;
        if ad == 0 {
            continue;
        }
        for (k, m) in (d..=n_max).step_by(d).enumerate() {
            acc[m] += ad * b[k + 1] as i32;
        }
    }
    let lambda = acc.into_iter().map(|v| v as f64).collect();
    EigenTable::from_parts(spec, lambda, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenvalues::local::{extend_prime_power, lambda_prime_power};
    use crate::oracle;

    fn coprime(a: usize, b: usize) -> bool {
        num_integer::gcd(a, b) == 1
    }

    fn check_multiplicative(t: &EigenTable, limit: usize) {
        for m in 2..=limit {
            for n in (m + 1)..=limit / m {
                if coprime(m, n) {
                    let d = t.lambda(m * n) - t.lambda(m) * t.lambda(n);
                    assert!(d.abs() <= 1e-9, "{} at ({m},{n}): {d}", t.spec());
                }
            }
        }
    }

    #[test]
    fn tau_first_ten() {
        let t = build_table(FormSpec::Level1Holomorphic { weight: 12 }, 10).unwrap();
        let raw: Vec<i128> = (1..=10).map(|n| t.raw().unwrap().get_i128(n).unwrap()).collect();
        assert_eq!(raw, oracle::tau_power_series(10));
        assert_eq!(
            raw,
            vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]
        );
        assert_eq!(t.lambda(1), 1.0);
    }

    #[test]
    fn tau_matches_oracle_to_600() {
        let t = build_table(FormSpec::Level1Holomorphic { weight: 12 }, 600).unwrap();
        let oracle = oracle::tau_power_series(600);
        for n in 1..=600 {
            assert_eq!(t.raw().unwrap().get_i128(n), Some(oracle[n - 1]), "n = {n}");
        }
    }

    #[test]
    fn higher_weights_match_naive_products() {
        for &k in &[16u32, 18, 20, 22, 26] {
            let spec = FormSpec::Level1Holomorphic { weight: k };
            let t = build_table(spec, 120).unwrap();
            let naive = oracle::level1_power_series(k, 120);
            for n in 1..=120 {
                assert_eq!(t.raw_bigint(n).unwrap(), BigInt::from(naive[n - 1]), "k={k} n={n}");
            }
            check_multiplicative(&t, 120);
            for p in crate::arith::primes_up_to(120) {
                assert!(t.lambda(p as usize).abs() <= 2.0 + 1e-12, "k={k} p={p}");
            }
        }
    }

    #[test]
    fn level1_invariants() {
        let t = build_table(FormSpec::Level1Holomorphic { weight: 12 }, 20_000).unwrap();
        check_multiplicative(&t, 20_000);
        for p in crate::arith::primes_up_to(20_000) {
            assert!(t.lambda(p as usize).abs() <= 2.0 + 1e-12);
        }
        // integrality: absolute 1e-6 is only reachable while |a(n)| is well
        // inside the f64 mantissa, beyond that the error is relative
        let raw = t.raw().unwrap();
        for n in 1..=20_000 {
            let a = raw.to_f64(n);
            let scaled = t.lambda(n) * t.normalizer(n);
            assert!((scaled - a).abs() <= 1e-6 + 1e-13 * a.abs(), "n={n}");
            if a.abs() < 1e9 {
                assert_eq!(scaled.round(), a, "n={n}");
            }
        }
    }

    #[test]
    fn limb_width_tracks_coefficient_bound() {
        let t = build_table(FormSpec::Level1Holomorphic { weight: 12 }, 1 << 16).unwrap();
        assert_eq!(t.raw().unwrap().width(), 2);
        for p in crate::arith::primes_up_to(1 << 16).step_by(97) {
            let l = t.lambda(p as usize);
            assert!(l.abs() <= 2.0);
        }
    }

    #[test]
    fn capacity_reported() {
        let err = build_table_with_budget(FormSpec::Level1Holomorphic { weight: 12 }, 5000, 1000)
            .unwrap_err();
        assert_eq!(
            err,
            Error::CapacityExceeded {
                what: "level-1 table of length 5000".into(),
                max_feasible: 1000
            }
        );
    }

    #[test]
    fn cm_table_invariants() {
        let t = build_table(FormSpec::CMGaussian, 30_000).unwrap();
        assert_eq!(t.lambda(1), 1.0);
        for p in crate::arith::primes_up_to(30_000) {
            let l = t.lambda(p as usize);
            if p % 4 == 3 || p == 2 {
                assert_eq!(l, 0.0);
            } else {
                assert!(l.abs() <= 2.0 + 1e-12);
            }
            if p <= 2000 {
                assert_eq!(
                    t.raw().unwrap().get_i128(p as usize).unwrap() as i64,
                    oracle::cm_trace_by_point_count(p)
                );
            }
        }
        check_multiplicative(&t, 30_000);
    }

    #[test]
    fn hecke_recursion_consistency() {
        for spec in [
            FormSpec::Level1Holomorphic { weight: 12 },
            FormSpec::CMGaussian,
            FormSpec::Isobaric {
                psi1: DirichletChar::Trivial,
                psi2: DirichletChar::Kronecker(-3),
            },
            FormSpec::TrivialQuadratic { d: -4 },
        ] {
            let t = build_table(spec, 5000).unwrap();
            for p in crate::arith::primes_up_to(5000) {
                let ram = spec.is_ramified(p);
                let mut pe = p;
                let mut e = 1;
                while pe <= 5000 {
                    let want = if spec.characters().is_some() {
                        lambda_prime_power(&spec, p, t.lambda(p as usize), e).unwrap()
                    } else {
                        extend_prime_power(t.lambda(p as usize), e, ram).unwrap()
                    };
                    assert!((t.lambda(pe as usize) - want).abs() < 1e-9, "{spec} p^{e}={pe}");
                    pe *= p;
                    e += 1;
                }
            }
        }
    }

    #[test]
    fn noncuspidal_tables() {
        let iso = build_table(
            FormSpec::Isobaric {
                psi1: DirichletChar::Trivial,
                psi2: DirichletChar::Trivial,
            },
            12,
        )
        .unwrap();
        assert_eq!(iso.lambda(12), 6.0);
        assert!(iso.raw().is_none());
        let tq = build_table(FormSpec::TrivialQuadratic { d: -4 }, 10_000).unwrap();
        assert_eq!(tq.lambda(25), 3.0);
        for n in 1..=10_000 {
            assert_eq!(tq.lambda(n), oracle::gaussian_ideal_count(n as u64) as f64, "n={n}");
        }
        check_multiplicative(&tq, 10_000);
        let mixed = build_table(
            FormSpec::Isobaric {
                psi1: DirichletChar::Kronecker(5),
                psi2: DirichletChar::Kronecker(-3),
            },
            3000,
        )
        .unwrap();
        check_multiplicative(&mixed, 3000);
    }
}
