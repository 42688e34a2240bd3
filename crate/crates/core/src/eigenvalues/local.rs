use serde::{Deserialize, Serialize};

use crate::arith::{cornacchia, kronecker};
use crate::error::{Error, Result};

use super::form::FormSpec;
use super::table::EigenTable;

const BOUND_SLACK: f64 = 1e-9;

/// `lambda(p^e)` from `lambda(p)`. Unramified primes follow the Hecke
/// recursion `lambda(p^{e+1}) = lambda(p) lambda(p^e) - lambda(p^{e-1})`;
/// ramified ones are completely multiplicative.
///
/// This assumes a trivial central character, which holds for level-1 and CM
/// forms. Sums of two characters need [`extend_prime_power_central`].
pub fn extend_prime_power(lambda_p: f64, e: u32, ramified: bool) -> Result<f64> {
    extend_prime_power_central(lambda_p, e, ramified, 1.0)
}

/// [`extend_prime_power`] with central character value `omega_p = +-1`:
/// `lambda(p^{e+1}) = lambda(p) lambda(p^e) - omega_p lambda(p^{e-1})`.
pub fn extend_prime_power_central(lambda_p: f64, e: u32, ramified: bool, omega_p: f64) -> Result<f64> {
    let bound = if ramified { 1.0 } else { 2.0 };
    if !lambda_p.is_finite() || lambda_p.abs() > bound + BOUND_SLACK {
        return Err(Error::Domain(format!(
            "|lambda(p)| = {} exceeds {bound} at a{} prime",
            lambda_p.abs(),
            if ramified { " ramified" } else { "n unramified" }
        )));
    }
    if ramified {
        return Ok(lambda_p.powi(e as i32));
    }
    if e == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, lambda_p);
    for _ in 1..e {
        let next = lambda_p * cur - omega_p * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `lambda(p^e)` for `spec` given `lambda(p)`, using the right central character.
pub fn lambda_prime_power(spec: &FormSpec, p: u64, lambda_p: f64, e: u32) -> Result<f64> {
    extend_prime_power_central(
        lambda_p,
        e,
        spec.is_ramified(p),
        spec.central_character(p) as f64,
    )
}

/// Integer version of the recursion for unnormalized coefficients:
/// `a(p^{e+1}) = a(p) a(p^e) - p^{k-1} a(p^{e-1})`.
pub(crate) fn raw_prime_power(a_p: i128, p: u64, e: u32, twice_shift: u32) -> i128 {
    let pk = (p as i128).pow(twice_shift);
    let (mut prev, mut cur) = (1i128, a_p);
    if e == 0 {
        return 1;
    }
    for _ in 1..e {
        let next = a_p * cur - pk * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Whether `x + yi = 1 mod (1+i)^3`.
fn is_primary(x: i64, y: i64) -> bool {
    (x - 1 + y).rem_euclid(4) == 0 && (y - x + 1).rem_euclid(4) == 0
}

/// Trace of Frobenius `a_p` of `y^2 = x^3 - x`. For split `p = N(alpha)` the
/// Hecke character sends `(alpha)` to its primary generator, so
/// `a_p = alpha + conj(alpha) = 2 Re(alpha)`; inert and ramified primes give 0.
pub fn cm_trace(p: u64) -> i64 {
    if p % 4 != 1 {
        return 0;
    }
    let g = cornacchia(p).expect("p = 1 mod 4 must split in Z[i]");
    let (a, b) = (g.a, g.b);
    for (x, y) in [(a, b), (-a, -b), (a, -b), (-a, b)] {
        if is_primary(x, y) {
            return 2 * x;
        }
    }
    unreachable!("one associate of {a} + {b}i is primary")
}

/// Eigenvalue at a prime from a closed formula. Level-1 forms have none and
/// must be read from a table.
pub fn lambda_at_prime(spec: &FormSpec, p: u64) -> Result<f64> {
    match *spec {
        FormSpec::Level1Holomorphic { .. } => Err(Error::UnsupportedPrime { p, at: None }),
        FormSpec::CMGaussian => Ok(cm_trace(p) as f64 / (p as f64).sqrt()),
        FormSpec::Isobaric { psi1, psi2 } => Ok((psi1.value(p) + psi2.value(p)) as f64),
        FormSpec::TrivialQuadratic { d } => Ok((1 + kronecker(d, p)) as f64),
    }
}

/// Angles `alpha_p in [0, 1/2]` with `lambda(p) = 2 cos(2 pi alpha_p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSeries {
    pub entries: Vec<(u64, f64)>,
}

pub fn angle_of(lambda: f64) -> f64 {
    (lambda / 2.0).clamp(-1.0, 1.0).acos() / std::f64::consts::TAU
}

pub fn angles(table: &EigenTable, p_max: u64) -> Result<AngleSeries> {
    if p_max as usize > table.n_max() {
        return Err(Error::Domain(format!(
            "p_max {p_max} exceeds table size {}",
            table.n_max()
        )));
    }
    let spec = table.spec();
    let mut entries = Vec::new();
    for p in crate::arith::primes_up_to(p_max) {
        if spec.is_ramified(p) {
            continue;
        }
        let l = table.lambda(p as usize);
        if l.abs() > 2.0 + 1e-12 {
            return Err(Error::RamanujanViolation { p, value: l.abs() });
        }
        entries.push((p, angle_of(l)));
    }
    Ok(AngleSeries { entries })
}
