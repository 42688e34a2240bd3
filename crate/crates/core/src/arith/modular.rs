use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a % m) * (b % m) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = ((n as f64).sqrt() as u64).min(u32::MAX as u64);
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a / n)` for odd `n`.
pub fn jacobi(a: u64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(d / n)` for `n >= 1`; `n = 0` follows the usual
/// convention (`1` iff `d = +-1`).
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return i32::from(d == 1 || d == -1);
    }
    let tz = n.trailing_zeros();
    let odd = n >> tz;
    let mut result = 1;
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -1;
        }
    }
    if odd == 1 {
        return result;
    }
    let a = (d as i128).rem_euclid(odd as i128) as u64;
    result * jacobi(a, odd)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks), normalised to
/// the representative `r <= p / 2`.
pub fn sqrt_mod(a: i64, p: u64) -> Result<u64> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::Domain(format!("sqrt_mod needs an odd prime, got {p}")));
    }
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return Ok(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return Err(Error::NonResidue { a, p });
    }
    let r = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut z = 2;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Ok(r.min(p - r))
}

/// Split prime of `Z[i]`: `a^2 + b^2 = p` with `a` odd and positive, `b` even
/// and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianFactor {
    pub a: i64,
    pub b: i64,
    pub p: u64,
}

/// Two-square decomposition of a prime `p = 1 mod 4`.
pub fn cornacchia(p: u64) -> Result<GaussianFactor> {
    match p {
        2 => return Err(Error::Ramified(2)),
        _ if p % 4 == 3 => return Err(Error::Inert(p)),
        _ if p % 4 != 1 => return Err(Error::Domain(format!("{p} is not an odd prime"))),
        _ => {}
    }
    let r = sqrt_mod(-1, p)?;
    let (mut x, mut y) = (p, r);
    let bound = isqrt(p);
    while y > bound {
        let t = x % y;
        x = y;
        y = t;
    }
    let a = y;
    let rest = p - a * a;
    let b = isqrt(rest);
    if b * b != rest {
        return Err(Error::Domain(format!("{p} is not a prime")));
    }
    let (odd, even) = if a % 2 == 1 { (a, b) } else { (b, a) };
    Ok(GaussianFactor {
        a: odd as i64,
        b: even as i64,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(-4, 1), 1);
    }

    #[test]
    fn kronecker_minus_four_rule() {
        for n in 1..=10_000u64 {
            let expected = match n % 4 {
                1 => 1,
                3 => -1,
                _ => 0,
            };
            assert_eq!(kronecker(-4, n), expected, "n = {n}");
        }
    }

    #[test]
    fn kronecker_period_and_multiplicativity() {
        for &d in &[-4i64, -3, 5, 8, -8, 12, -7, 13, -20] {
            let m = d.unsigned_abs();
            for n in 1..=600u64 {
                assert_eq!(kronecker(d, n), kronecker(d, n + m), "d={d} n={n}");
                for k in 1..=40u64 {
                    assert_eq!(
                        kronecker(d, n * k),
                        kronecker(d, n) * kronecker(d, k),
                        "d={d} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod(-1, 5).unwrap(), 2);
        assert_eq!(sqrt_mod(2, 7).unwrap(), 3);
        assert_eq!(sqrt_mod(3, 7), Err(Error::NonResidue { a: 3, p: 7 }));
        assert_eq!(sqrt_mod(0, 11).unwrap(), 0);
    }

    #[test]
    fn sqrt_mod_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let primes: Vec<u64> = crate::arith::primes_up_to(200_000).skip(1).collect();
        let mut checked = 0;
        while checked < 1000 {
            let p = primes[rng.gen_range(0..primes.len())];
            let x = rng.gen_range(1..p);
            let a = mul_mod(x, x, p);
            let r = sqrt_mod(a as i64, p).unwrap();
            assert_eq!(mul_mod(r, r, p), a);
            assert!(r <= p / 2);
            checked += 1;
        }
        // 10^18 + 9 is prime and = 1 mod 8, so Tonelli-Shanks takes the long path
        let p = 1_000_000_000_000_000_009u64;
        for x in [3u64, 12345, 987_654_321_012] {
            let a = mul_mod(x, x, p);
            let r = sqrt_mod(a as i64, p).unwrap();
            assert_eq!(mul_mod(r, r, p), a);
        }
    }

    #[test]
    fn cornacchia_examples() {
        assert_eq!(cornacchia(5).unwrap(), GaussianFactor { a: 1, b: 2, p: 5 });
        assert_eq!(cornacchia(13).unwrap(), GaussianFactor { a: 3, b: 2, p: 13 });
        assert_eq!(cornacchia(3), Err(Error::Inert(3)));
        assert_eq!(cornacchia(2), Err(Error::Ramified(2)));
    }

    #[test]
    fn cornacchia_matches_exhaustive_search() {
        for p in crate::arith::primes_up_to(10_000).filter(|p| p % 4 == 1) {
            let g = cornacchia(p).unwrap();
            assert_eq!((g.a * g.a + g.b * g.b) as u64, p);
            assert!(g.a > 0 && g.a % 2 == 1 && g.b % 2 == 0);
            let brute = (1..=isqrt(p))
                .filter(|a| a % 2 == 1)
                .find_map(|a| {
                    let r = p - a * a;
                    let b = isqrt(r);
                    (b * b == r).then_some((a as i64, b as i64))
                })
                .unwrap();
            assert_eq!((g.a, g.b), brute, "p = {p}");
        }
        let big = 10_000_000_000_037u64;
        assert!(is_prime(big));
        let g = cornacchia(big).unwrap();
        assert_eq!(g.a as u128 * g.a as u128 + g.b as u128 * g.b as u128, big as u128);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..200).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, crate::oracle::trial_division_primes(199));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn isqrt_near_word_limit() {
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
        assert_eq!(isqrt((u32::MAX as u64).pow(2)), u32::MAX as u64);
        assert_eq!(isqrt((u32::MAX as u64).pow(2) - 1), u32::MAX as u64 - 1);
        assert_eq!(isqrt_u128(u128::MAX), u64::MAX as u128);
    }

    proptest! {
        #[test]
        fn isqrt_is_floor(n in any::<u64>()) {
            let r = isqrt(n) as u128;
            prop_assert!(r * r <= n as u128);
            prop_assert!((r + 1) * (r + 1) > n as u128);
        }

        #[test]
        fn jacobi_matches_euler_on_primes(a in 0u64..10_000, idx in 1usize..500) {
            let p = crate::oracle::trial_division_primes(4000)[idx];
            let euler = pow_mod(a, (p - 1) / 2, p);
            let expected = if a % p == 0 { 0 } else if euler == 1 { 1 } else { -1 };
            prop_assert_eq!(jacobi(a, p), expected);
        }
    }
}
