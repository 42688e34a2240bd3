use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::eigenvalues::EigenTable;
use crate::error::{Error, Result};

use super::sums::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentMeasure {
    /// `(2/pi) sin^2(t) dt` on `[0, pi]`.
    SatoTate,
    /// `dt / pi` on `[0, pi]`.
    UniformAngle,
}

impl FromStr for MomentMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sato-tate" | "sato_tate" | "st" => Ok(MomentMeasure::SatoTate),
            "uniform" | "uniform-angle" | "uniform_angle" => Ok(MomentMeasure::UniformAngle),
            _ => Err(Error::Domain(format!("unknown measure `{s}`"))),
        }
    }
}

fn check_k(k: u32) -> Result<()> {
    if matches!(k, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(Error::Domain(format!("moment order {k} not in {{1, 2, 4}}")))
    }
}

/// `E |2 cos t|^k` under `measure`, by composite Simpson's rule on each side
/// of the kink at `pi/2`.
pub fn st_moment(k: u32, measure: MomentMeasure) -> Result<f64> {
    check_k(k)?;
    let f = |t: f64| {
        let v = (2.0 * t.cos()).abs().powi(k as i32);
        match measure {
            MomentMeasure::SatoTate => v * (2.0 / PI) * t.sin().powi(2),
            MomentMeasure::UniformAngle => v / PI,
        }
    };
    Ok(simpson(f, 0.0, PI / 2.0, 4096) + simpson(f, PI / 2.0, PI, 4096))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Mean of `|lambda(p)|^k` over unramified primes `p <= p_max`.
pub fn empirical_moments(table: &EigenTable, k: u32, p_max: u64) -> Result<f64> {
    check_k(k)?;
    if p_max as usize > table.n_max() {
        return Err(Error::Domain(format!(
            "p_max {p_max} exceeds table size {}",
            table.n_max()
        )));
    }
    let spec = table.spec();
    let mut sum = NeumaierSum::default();
    let mut count = 0u64;
    for p in primes_up_to(p_max) {
        if spec.is_ramified(p) {
            continue;
        }
        sum.add(table.lambda(p as usize).abs().powi(k as i32));
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyDomain(format!("no unramified primes up to {p_max}")));
    }
    Ok(sum.value() / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenvalues::{build_table, FormSpec};

    #[test]
    fn closed_forms() {
        let st = MomentMeasure::SatoTate;
        let un = MomentMeasure::UniformAngle;
        assert!((st_moment(1, st).unwrap() - 8.0 / (3.0 * PI)).abs() < 1e-10);
        assert!((st_moment(2, st).unwrap() - 1.0).abs() < 1e-10);
        assert!((st_moment(4, st).unwrap() - 2.0).abs() < 1e-10);
        assert!((st_moment(1, un).unwrap() - 4.0 / PI).abs() < 1e-10);
        assert!((st_moment(2, un).unwrap() - 2.0).abs() < 1e-10);
        assert!((st_moment(4, un).unwrap() - 6.0).abs() < 1e-10);
        assert!(st_moment(3, st).is_err());
    }

    #[test]
    fn empirical() {
        let t = build_table(FormSpec::Level1Holomorphic { weight: 12 }, 100).unwrap();
        assert_eq!(empirical_moments(&t, 1, 2).unwrap(), t.lambda(2).abs());
        assert!(empirical_moments(&t, 1, 101).is_err());
        let cm = build_table(FormSpec::CMGaussian, 1_000_000).unwrap();
        let m2 = empirical_moments(&cm, 2, 1_000_000).unwrap();
        assert!((m2 - 1.0).abs() < 0.05, "{m2}");
    }
}
