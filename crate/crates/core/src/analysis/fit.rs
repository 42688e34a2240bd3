use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sums::SumSeries;

/// Regression target for [`fit_loglog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMode {
    /// `value` against `log log x`, for prime sums.
    PrimeSum,
    /// `log(value / x)` against `log log x`, for sums over all `n <= x`.
    FullSum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub label: String,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub window: (u64, u64),
    pub points: usize,
}

/// Unweighted least squares over the checkpoints with `lo <= x <= hi`.
pub fn fit_loglog(series: &SumSeries, window: (u64, u64), mode: FitMode) -> Result<FitResult> {
    let (lo, hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (x, v) in series.window(lo, hi) {
        if x < 3 {
            // log log x is undefined or negative below e
            continue;
        }
        let y = match mode {
            FitMode::PrimeSum => v,
            FitMode::FullSum => {
                if v <= 0.0 {
                    return Err(Error::Domain(format!(
                        "full-sum fit needs positive values, got {v} at x = {x}"
                    )));
                }
                (v / x as f64).ln()
            }
        };
        xs.push((x as f64).ln().ln());
        ys.push(y);
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} checkpoints in [{lo}, {hi}], need at least 4",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData("all checkpoints at one abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    let first = series.window(lo, hi).map(|(x, _)| x).find(|&x| x >= 3).unwrap_or(lo);
    let last = series.window(lo, hi).map(|(x, _)| x).last().unwrap_or(hi);
    Ok(FitResult {
        label: series.label.clone(),
        slope,
        intercept,
        r2,
        window: (first, last),
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::checkpoints;

    fn synthetic(f: impl Fn(f64) -> f64) -> SumSeries {
        SumSeries {
            label: "synthetic".into(),
            checkpoints: checkpoints(10_000_000, 128, 2.0)
                .unwrap()
                .into_iter()
                .map(|x| (x, f(x as f64)))
                .collect(),
        }
    }

    #[test]
    fn recovers_affine_log_log() {
        let s = synthetic(|x| 0.5 * x.ln().ln() + 1.0);
        let f = fit_loglog(&s, (1000, 10_000_000), FitMode::PrimeSum).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        assert!((f.intercept - 1.0).abs() < 1e-12);
        assert_eq!(f.r2, 1.0);
        assert_eq!(f.window, (1024, 10_000_000));
    }

    #[test]
    fn full_sum_mode() {
        // X log(X)^{-0.3}
        let s = synthetic(|x| x * x.ln().powf(-0.3));
        let f = fit_loglog(&s, (128, u64::MAX), FitMode::FullSum).unwrap();
        assert!((f.slope + 0.3).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let s = synthetic(|x| x);
        assert!(matches!(
            fit_loglog(&s, (1000, 5000), FitMode::PrimeSum),
            Err(Error::InsufficientData(_))
        ));
    }
}
