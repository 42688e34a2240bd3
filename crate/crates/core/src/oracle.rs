//! Slow, independent reference computations.
//!
//! Nothing in here calls into the fast paths it is used to check: primes come
//! from trial division or a plain sieve, `tau` from the pentagonal-number
//! product, CM traces from exhaustive point counts, root counts from
//! evaluating at every residue.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes `<= limit` by trial division.
pub fn trial_division_primes(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// Primes `<= limit` by a single unsegmented sieve of Eratosthenes.
pub fn eratosthenes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut mark = vec![true; n + 1];
    mark[0] = false;
    mark[1] = false;
    let mut i = 2;
    while i * i <= n {
        if mark[i] {
            for j in (i * i..=n).step_by(i) {
                mark[j] = false;
            }
        }
        i += 1;
    }
    mark.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| i as u64)
        .collect()
}

fn mul_truncated(a: &[i128], b: &[i128], len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j]
                .checked_add(x.checked_mul(y).expect("oracle overflow"))
                .expect("oracle overflow");
        }
    }
    out
}

/// Coefficients of `prod_{m >= 1} (1 - q^m)` up to `q^{len-1}`, from Euler's
/// pentagonal number theorem.
fn euler_product(len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    out[0] = 1;
    for k in 1i64.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 >= len {
            break;
        }
        out[g1] += sign;
        if g2 < len {
            out[g2] += sign;
        }
    }
    out
}

/// Ramanujan `tau(n)` for `1 <= n <= n_max` from `q * prod (1 - q^m)^24`,
/// multiplied out naively.
pub fn tau_power_series(n_max: usize) -> Vec<i128> {
    let len = n_max;
    let e1 = euler_product(len);
    let e2 = mul_truncated(&e1, &e1, len);
    let e4 = mul_truncated(&e2, &e2, len);
    let e8 = mul_truncated(&e4, &e4, len);
    let e16 = mul_truncated(&e8, &e8, len);
    mul_truncated(&e16, &e8, len)
}

fn sigma(n: u64, k: u32) -> i128 {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| (d as i128).pow(k))
        .sum()
}

/// Normalized level-1 eigenform of weight `k` as `Delta * E4^a * E6^b`,
/// coefficients `a(1..=n_max)`, all products done naively.
pub fn level1_power_series(weight: u32, n_max: usize) -> Vec<i128> {
    let (a, b) = match weight {
        12 => (0, 0),
        16 => (1, 0),
        18 => (0, 1),
        20 => (2, 0),
        22 => (1, 1),
        26 => (2, 1),
        _ => panic!("no level-1 cusp form of weight {weight} in range"),
    };
    let len = n_max;
    let mut acc = tau_power_series(n_max); // coefficient of q^{i+1}
    let e4: Vec<i128> = (0..len)
        .map(|i| if i == 0 { 1 } else { 240 * sigma(i as u64, 3) })
        .collect();
    let e6: Vec<i128> = (0..len)
        .map(|i| if i == 0 { 1 } else { -504 * sigma(i as u64, 5) })
        .collect();
    for _ in 0..a {
        acc = mul_truncated(&acc, &e4, len);
    }
    for _ in 0..b {
        acc = mul_truncated(&acc, &e6, len);
    }
    acc
}

/// `a_p = p + 1 - #E(F_p)` for `E: y^2 = x^3 - x`, by counting every affine
/// point plus the point at infinity.
pub fn cm_trace_by_point_count(p: u64) -> i64 {
    let mut square_count = vec![0u32; p as usize];
    for y in 0..p {
        square_count[((y * y) % p) as usize] += 1;
    }
    let mut points = 1u64;
    for x in 0..p {
        let rhs = ((x * x % p) * x % p + p - x) % p;
        points += square_count[rhs as usize] as u64;
    }
    p as i64 + 1 - points as i64
}

/// Number of residues `a mod p` with `P(a) = 0 mod p`, by evaluating at each.
pub fn brute_force_root_count(coeffs: &[BigInt], p: u64) -> u32 {
    let pb = BigInt::from(p);
    let reduced: Vec<u64> = coeffs
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    (0..p)
        .filter(|&a| {
            let mut v = 0u128;
            for &c in reduced.iter().rev() {
                v = (v * a as u128 + c as u128) % p as u128;
            }
            v == 0
        })
        .count() as u32
}

/// Number of ideals of norm `n` in `Z[i]`: lattice points on `a^2 + b^2 = n`
/// divided by the four units.
pub fn gaussian_ideal_count(n: u64) -> u64 {
    let mut points = 0u64;
    let mut a = 0u64;
    while a * a <= n {
        let rest = n - a * a;
        let b = (rest as f64).sqrt() as u64;
        for bb in b.saturating_sub(1)..=b + 1 {
            if bb * bb == rest {
                let a_signs = if a == 0 { 1 } else { 2 };
                let b_signs = if bb == 0 { 1 } else { 2 };
                points += a_signs * b_signs;
            }
        }
        a += 1;
    }
    points / 4
}

/// Prime factorization by trial division.
pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisor_count(n: u64) -> u64 {
    trial_factor(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// `sum_{n <= x} d(n)` by the Dirichlet hyperbola method.
pub fn divisor_sum_hyperbola(x: u64) -> u64 {
    let r = (x as f64).sqrt() as u64;
    let r = (r.saturating_sub(2)..=r + 2)
        .filter(|&t| t * t <= x)
        .max()
        .unwrap();
    2 * (1..=r).map(|i| x / i).sum::<u64>() - r * r
}

/// Evaluates `P(n)` exactly.
pub fn eval_big(coeffs: &[BigInt], n: i64) -> BigInt {
    let mut v = BigInt::zero();
    for c in coeffs.iter().rev() {
        v = v * n + c;
    }
    v
}

/// `|P(n)|` as `u64`; panics when it does not fit.
pub fn abs_value(coeffs: &[BigInt], n: i64) -> u64 {
    eval_big(coeffs, n).abs().to_u64().expect("value exceeds u64")
}

/// Discriminant through a resultant computed by the Euclidean algorithm over
/// the rationals (not the Sylvester determinant used by `Poly`).
pub fn discriminant_by_euclid(coeffs: &[BigInt]) -> BigInt {
    type Q = BigRational;
    fn trim(mut v: Vec<Q>) -> Vec<Q> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
    fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        while r.len() > db {
            let k = r.len() - 1;
            let q = &r[k] / &b[db];
            for (j, bj) in b.iter().enumerate() {
                let t = &q * bj;
                r[k - db + j] -= t;
            }
            r.pop();
            r = trim(r);
        }
        r
    }
    // res(f, g) = (-1)^{deg f deg g} lc(g)^{deg f - deg r} res(g, r)
    fn res(f: &[Q], g: &[Q]) -> Q {
        let (m, n) = (f.len() - 1, g.len() - 1);
        if n == 0 {
            return num_traits::pow(g[0].clone(), m);
        }
        let r = rem(f, g);
        if r.is_empty() {
            return Q::zero();
        }
        let sign = if (m * n) % 2 == 1 { -Q::one() } else { Q::one() };
        sign * num_traits::pow(g[n].clone(), m - (r.len() - 1)) * res(g, &r)
    }
    let f: Vec<Q> = coeffs.iter().map(|c| Q::from_integer(c.clone())).collect();
    let n = f.len() - 1;
    let df: Vec<Q> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
        .collect();
    let mut d = res(&f, &df) / &f[n];
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -d;
    }
    assert!(d.is_integer());
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_first_values() {
        let t = tau_power_series(10);
        assert_eq!(
            t,
            vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]
        );
    }

    #[test]
    fn point_counts() {
        assert_eq!(cm_trace_by_point_count(5), -2);
        assert_eq!(cm_trace_by_point_count(3), 0);
        assert_eq!(cm_trace_by_point_count(13), 6);
    }

    #[test]
    fn gaussian_ideals() {
        assert_eq!(gaussian_ideal_count(25), 3);
        assert_eq!(gaussian_ideal_count(3), 0);
        assert_eq!(gaussian_ideal_count(2), 1);
        assert_eq!(gaussian_ideal_count(1), 1);
        assert_eq!(gaussian_ideal_count(65), 4);
    }

    #[test]
    fn hyperbola() {
        let direct: u64 = (1..=1000).map(divisor_count).sum();
        assert_eq!(divisor_sum_hyperbola(1000), direct);
    }
}
