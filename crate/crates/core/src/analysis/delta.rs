use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `g(y) = y^{-2} (1 + y/2 - sqrt(1 + y))`, written as
/// `1 / (4 (1 + y/2 + sqrt(1 + y)))` after rationalising, which is smooth
/// through `y = 0` (where it equals 1/8) and free of cancellation.
pub fn delta_integrand(y: f64) -> f64 {
    0.25 / (1.0 + 0.5 * y + (1.0 + y).sqrt())
}

/// The unsimplified quotient, patched with its limit at `y = 0`. Only used to
/// cross-check [`delta_integrand`].
pub fn delta_integrand_literal(y: f64) -> f64 {
    if y == 0.0 {
        0.125
    } else {
        (1.0 + 0.5 * y - (1.0 + y).sqrt()) / (y * y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaResult {
    pub range: (f64, f64),
    pub value: f64,
    pub argmin: f64,
}

const GRID_STEP: f64 = 1e-4;
const REFINE_TOL: f64 = 1e-10;

/// `inf g` over `[lo, hi]` by a grid scan followed by golden-section search
/// around the best grid point.
pub fn delta_constant(lo: f64, hi: f64) -> Result<DeltaResult> {
    if !(lo >= -1.0 && lo < hi && hi.is_finite()) {
        return Err(Error::Domain(format!("need -1 <= lo < hi, got [{lo}, {hi}]")));
    }
    let steps = ((hi - lo) / GRID_STEP).ceil().max(1.0) as usize;
    let at = |i: usize| if i == steps { hi } else { lo + (hi - lo) * i as f64 / steps as f64 };
    let best = (0..=steps)
        .min_by(|&a, &b| delta_integrand(at(a)).total_cmp(&delta_integrand(at(b))))
        .expect("nonempty grid");
    let (a, b) = (at(best.saturating_sub(1)), at((best + 1).min(steps)));
    let y = golden_section(delta_integrand, a, b);
    let mut argmin = y;
    // the minimiser may sit on the bracket edge, which golden section only approaches
    for cand in [a, b, at(best)] {
        if delta_integrand(cand) <= delta_integrand(argmin) {
            argmin = cand;
        }
    }
    Ok(DeltaResult {
        range: (lo, hi),
        value: delta_integrand(argmin),
        argmin,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > REFINE_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

fn grid(lo: f64, hi: f64, step: f64) -> Result<impl Iterator<Item = f64>> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("grid step {step} must be positive")));
    }
    let n = ((hi - lo) / step).ceil() as usize;
    Ok((0..=n).map(move |i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 }))
}

/// Largest value of `(|t| - 1) - (1/2 (t^2 - 1) - delta (t^2 - 1)^2)` over a
/// grid on `[-2, 2]`; positive values are violations.
pub fn pointwise_inequality_check(delta: f64, step: f64) -> Result<f64> {
    if step > 1e-3 {
        return Err(Error::Domain(format!("grid step {step} exceeds 1e-3")));
    }
    Ok(grid(-2.0, 2.0, step)?
        .map(|t| {
            let u = t * t - 1.0;
            (t.abs() - 1.0) - (0.5 * u - delta * u * u)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Largest value of `2 |cos(2 pi a)| - (3/2 + 1/2 cos(4 pi a))` over a grid on
/// `[0, 1]`.
pub fn cosine_identity_check(step: f64) -> Result<f64> {
    if step > 1e-4 {
        return Err(Error::Domain(format!("grid step {step} exceeds 1e-4")));
    }
    let tau = std::f64::consts::TAU;
    Ok(grid(0.0, 1.0, step)?
        .map(|a| 2.0 * (tau * a).cos().abs() - (1.5 + 0.5 * (2.0 * tau * a).cos()))
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_agree() {
        for i in -1000..=3000 {
            let y = i as f64 / 1000.0;
            if y.abs() < 1e-3 {
                continue; // literal form cancels catastrophically near 0
            }
            let (a, b) = (delta_integrand(y), delta_integrand_literal(y));
            assert!((a - b).abs() < 1e-9, "y={y}: {a} vs {b}");
        }
        assert_eq!(delta_integrand(0.0), 0.125);
    }

    #[test]
    fn constants() {
        let d = delta_constant(-1.0, 2.0).unwrap();
        assert!((d.value - (2.0 - 3f64.sqrt()) / 4.0).abs() < 1e-8);
        assert!((0.066985..=0.066990).contains(&d.value));
        assert!((d.argmin - 2.0).abs() <= 1e-6);
        let d = delta_constant(-1.0, 3.0).unwrap();
        assert!((d.value - 1.0 / 18.0).abs() < 1e-12);
        assert!((d.argmin - 3.0).abs() <= 1e-6);
        let d = delta_constant(-0.001, 0.001).unwrap();
        assert!((d.value - 0.125).abs() < 1e-4);
        assert!(delta_constant(-2.0, 1.0).is_err());
        assert!(delta_constant(1.0, 1.0).is_err());
    }

    #[test]
    fn interior_minimum_is_refined() {
        // sanity check of the search on a function with an interior minimum
        let y = golden_section(|y| (y - 0.3).powi(2), -1.0, 2.0);
        assert!((y - 0.3).abs() < 1e-8);
    }

    #[test]
    fn pointwise_inequality() {
        let full = delta_constant(-1.0, 3.0).unwrap().value;
        assert!(pointwise_inequality_check(full, 1e-4).unwrap() <= 1e-9);
        let short = delta_constant(-1.0, 2.0).unwrap().value;
        assert!(pointwise_inequality_check(short, 1e-4).unwrap() > 0.0);
        assert!(pointwise_inequality_check(0.0, 1e-4).unwrap() <= 0.0);
        assert!(pointwise_inequality_check(0.0, 1e-2).is_err());
    }

    #[test]
    fn cosine_identity() {
        assert!(cosine_identity_check(1e-4).unwrap() <= 1e-15);
        let gap = |a: f64| {
            let tau = std::f64::consts::TAU;
            2.0 * (tau * a).cos().abs() - (1.5 + 0.5 * (2.0 * tau * a).cos())
        };
        assert_eq!(gap(0.0), 0.0);
        assert!((gap(0.25) + 1.0).abs() < 1e-15);
    }
}
