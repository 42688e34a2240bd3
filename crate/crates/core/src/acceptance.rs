//! End-to-end acceptance checks. Each criterion compares the library against
//! an independent oracle or a known constant, within a wall-clock budget.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    delta_constant, empirical_moments, fit_loglog, prime_sum, prime_sum_at, st_moment, weighted_prime_sum, FitMode,
    MomentMeasure, SumKind, SumSeries,
};
use crate::eigenvalues::cache::load_or_build;
use crate::eigenvalues::{build_table, DirichletChar, EigenProvider, EigenTable, FormSpec};
use crate::error::Result;
use crate::factorsieve::eval_multiplicative;
use crate::galois::{chebotarev_stats, dihedral_char_average, dihedral_char_average_exact, DihedralSpec};
use crate::oracle;
use crate::polyarith::{rho, rho_table, Poly};
use crate::sieves::counterexample_demo;

/// Largest `X` the slope criteria run to.
pub const SLOPE_X: u64 = 10_000_000;
pub const SLOPE_WINDOW: (u64, u64) = (1_000, SLOPE_X);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    /// The mathematical check held.
    pub check_passed: bool,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed_secs < self.budget_secs
    }

    pub fn passed(&self) -> bool {
        self.check_passed && self.within_budget()
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>8.2}s / {:>4}s  {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_secs,
            self.budget_secs,
            self.detail
        )?;
        if self.check_passed && !self.within_budget() {
            write!(f, " (over budget)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct AcceptanceConfig {
    /// Run only these ids; all when empty.
    pub only: Vec<u32>,
    /// Where the large level-1 table is cached between runs.
    pub cache_dir: Option<PathBuf>,
}

pub const CRITERIA: [(u32, &str, f64); 13] = [
    (1, "delta constant", 1.0),
    (2, "tau oracle", 30.0),
    (3, "CM oracle", 10.0),
    (4, "rho oracle", 5.0),
    (5, "Chebotarev x^3-2", 60.0),
    (6, "Sato-Tate slope dichotomy", 300.0),
    (7, "moment boundedness", 60.0),
    (8, "weighted CM slope", 180.0),
    (9, "divisor-sum calibration", 60.0),
    (10, "counterexample hard zero", 10.0),
    (11, "dihedral characters", 1.0),
    (12, "CM correlation sum", 300.0),
    (13, "first Sato-Tate moment", 30.0),
];

struct Context {
    config: AcceptanceConfig,
    level1: Option<Arc<EigenTable>>,
}

impl Context {
    /// Weight-12 table up to `SLOPE_X`, built once.
    fn level1(&mut self) -> Result<Arc<EigenTable>> {
        if let Some(t) = &self.level1 {
            return Ok(t.clone());
        }
        let spec = FormSpec::Level1Holomorphic { weight: 12 };
        let t = Arc::new(load_or_build(spec, SLOPE_X as usize, self.config.cache_dir.as_deref())?);
        self.level1 = Some(t.clone());
        Ok(t)
    }
}

type Check = (bool, String);

pub fn run_all(config: AcceptanceConfig) -> Vec<CriterionOutcome> {
    run_with(config, |_| {})
}

/// Runs the selected criteria in order, reporting each outcome as it lands.
pub fn run_with(config: AcceptanceConfig, mut on_outcome: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    let only = config.only.clone();
    let mut ctx = Context { config, level1: None };
    let mut out = Vec::new();
    for (id, name, budget) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = match id {
            1 => c1_delta(),
            2 => c2_tau(),
            3 => c3_cm(),
            4 => c4_rho(),
            5 => c5_chebotarev(),
            6 => c6_slopes(&mut ctx),
            7 => c7_moments(&mut ctx),
            8 => c8_weighted(),
            9 => c9_divisor(),
            10 => c10_counterexample(),
            11 => c11_dihedral(),
            12 => c12_cm_correlation(),
            13 => c13_first_moment(&mut ctx),
            _ => unreachable!(),
        };
        let (check_passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
        let outcome = CriterionOutcome {
            id,
            name: name.to_string(),
            check_passed,
            elapsed_secs: start.elapsed().as_secs_f64(),
            budget_secs: budget,
            detail,
        };
        on_outcome(&outcome);
        out.push(outcome);
    }
    out
}

fn c1_delta() -> Result<Check> {
    let a = delta_constant(-1.0, 2.0)?;
    let b = delta_constant(-1.0, 3.0)?;
    let ok = (0.066985..=0.066990).contains(&a.value)
        && (a.argmin - 2.0).abs() <= 1e-6
        && (0.0555550..=0.0555561).contains(&b.value);
    Ok((
        ok,
        format!(
            "[-1,2]: {:.7} at {:.7}; [-1,3]: {:.7} at {:.7}",
            a.value, a.argmin, b.value, b.argmin
        ),
    ))
}

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn c2_tau() -> Result<Check> {
    const N: usize = 1_000_000;
    let table = build_table(FormSpec::Level1Holomorphic { weight: 12 }, N)?;
    let raw = table.raw().expect("level-1 tables carry raw coefficients");
    let direct = oracle::tau_power_series(1000);
    let series_mismatch = (1..=1000).filter(|&n| raw.get_i128(n) != Some(direct[n - 1])).count();

    let spf = smallest_prime_factors(N);
    let a = |n: usize| raw.get_bigint(n);
    let mut mult_fail = 0usize;
    let mut hecke_fail = 0usize;
    let mut ramanujan_fail = 0usize;
    for n in 2..=N {
        let p = spf[n] as usize;
        let mut m = n;
        let mut pe = 1;
        while m % p == 0 {
            m /= p;
            pe *= p;
        }
        if m > 1 {
            if a(n) != a(pe) * a(m) {
                mult_fail += 1;
            }
        } else if n == p {
            // a(p)^2 <= 4 p^11
            if a(p).pow(2) > BigInt::from(4) * BigInt::from(p).pow(11) {
                ramanujan_fail += 1;
            }
        } else {
            let lower = pe / p;
            let lower2 = if lower == p { 1 } else { lower / p };
            if a(pe) != a(p) * a(lower) - BigInt::from(p).pow(11) * a(lower2) {
                hecke_fail += 1;
            }
        }
    }
    let ok = series_mismatch == 0 && mult_fail == 0 && hecke_fail == 0 && ramanujan_fail == 0;
    Ok((
        ok,
        format!(
            "series mismatches {series_mismatch}, multiplicativity {mult_fail}, prime powers {hecke_fail}, Ramanujan {ramanujan_fail} up to {N}"
        ),
    ))
}

fn c3_cm() -> Result<Check> {
    let table = build_table(FormSpec::CMGaussian, 1_000_000)?;
    let raw = table.raw().expect("CM tables carry raw coefficients");
    let primes = oracle::trial_division_primes(2000);
    let trace_mismatch = primes
        .iter()
        .filter(|&&p| raw.get_i128(p as usize) != Some(oracle::cm_trace_by_point_count(p) as i128))
        .count();
    let nonzero_inert = crate::arith::primes_up_to(1_000_000)
        .filter(|p| p % 4 == 3)
        .filter(|&p| table.lambda(p as usize) != 0.0)
        .count();
    Ok((
        trace_mismatch == 0 && nonzero_inert == 0,
        format!(
            "{trace_mismatch} trace mismatches over {} primes <= 2000; {nonzero_inert} nonzero lambda(p), p = 3 mod 4",
            primes.len()
        ),
    ))
}

const CORPUS: [&str; 5] = ["x", "x^2 + 1", "x^3 - 2", "x^3 + x + 1", "x^4 + 1"];

fn c4_rho() -> Result<Check> {
    let mut mismatches = 0;
    let mut checked = 0;
    for text in CORPUS {
        let poly: Poly = text.parse()?;
        let table = rho_table(&poly, 1000)?;
        for p in oracle::trial_division_primes(1000) {
            let want = oracle::brute_force_root_count(poly.coeffs(), p);
            let single = rho(&poly, p)?;
            if table.get(p) != Some(want) || single != want {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    Ok((mismatches == 0, format!("{mismatches} mismatches in {checked} (poly, p) pairs")))
}

fn c5_chebotarev() -> Result<Check> {
    let poly: Poly = "x^3 - 2".parse()?;
    let f = chebotarev_stats(&poly, 1_000_000)?;
    let want = [("1;1;1", 1.0 / 6.0), ("1;2", 0.5), ("3", 1.0 / 3.0)];
    let ok = want.iter().all(|&(k, e)| (f.frequency(k) - e).abs() <= 0.02);
    let shown: Vec<String> = want.iter().map(|&(k, _)| format!("{{{k}}} {:.4}", f.frequency(k))).collect();
    Ok((ok, format!("{} over {} primes", shown.join(", "), f.sample_size)))
}

fn slope(series: &SumSeries, window: (u64, u64)) -> Result<f64> {
    Ok(fit_loglog(series, window, FitMode::PrimeSum)?.slope)
}

fn c6_slopes(ctx: &mut Context) -> Result<Check> {
    let level1 = EigenProvider::tabulated(ctx.level1()?);
    let cm = EigenProvider::closed_form(FormSpec::CMGaussian)?;
    let iso = EigenProvider::closed_form(FormSpec::Isobaric {
        psi1: DirichletChar::Trivial,
        psi2: DirichletChar::Trivial,
    })?;
    let pi = std::f64::consts::PI;
    let cases = [
        ("level1", &level1, 8.0 / (3.0 * pi) - 1.0),
        ("CM", &cm, 2.0 / pi - 1.0),
        ("isobaric", &iso, 1.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, provider, target) in cases {
        let s = slope(&prime_sum(provider, SumKind::S, SLOPE_X)?, SLOPE_WINDOW)?;
        ok &= (s - target).abs() <= 0.05;
        parts.push(format!("{name} {s:+.4} (target {target:+.4})"));
    }
    Ok((ok, parts.join(", ")))
}

fn c7_moments(ctx: &mut Context) -> Result<Check> {
    let provider = EigenProvider::tabulated(ctx.level1()?);
    let marks = crate::analysis::checkpoints(1_000_000, 1000, 2.0)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in [SumKind::T2, SumKind::T4] {
        let s = prime_sum_at(&provider, kind, &marks)?;
        let vals: Vec<f64> = s.window(1000, 1_000_000).map(|(_, v)| v).collect();
        let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        ok &= hi - lo <= 5.0;
        parts.push(format!("{kind} band {:.4}", hi - lo));
    }
    Ok((ok, parts.join(", ")))
}

fn c8_weighted() -> Result<Check> {
    let poly: Poly = "x^2 + 1".parse()?;
    let table = rho_table(&poly, SLOPE_X)?;
    let cm = EigenProvider::closed_form(FormSpec::CMGaussian)?;
    let s = slope(&weighted_prime_sum(&cm, &table, SLOPE_X)?, SLOPE_WINDOW)?;
    let target = 4.0 / std::f64::consts::PI - 1.0;
    Ok((
        (s - target).abs() <= 0.06 && s <= 0.5,
        format!("slope {s:+.4} (target {target:+.4}, ceiling 0.5)"),
    ))
}

fn c9_divisor() -> Result<Check> {
    let x = SLOPE_X;
    let iso = EigenProvider::closed_form(FormSpec::Isobaric {
        psi1: DirichletChar::Trivial,
        psi2: DirichletChar::Trivial,
    })?;
    let sum = eval_multiplicative(&"x".parse()?, x, &iso)?;
    let got = sum.series.final_value();
    let want = oracle::divisor_sum_hyperbola(x);
    let ratio = got / (x as f64 * (x as f64).ln());
    Ok((
        got == want as f64 && (ratio - 1.010).abs() <= 0.05 && sum.reconstruction_failures == 0,
        format!("sum {got} vs hyperbola {want}; ratio to X log X {ratio:.4}"),
    ))
}

fn c10_counterexample() -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    for x in [100u64, 1_000, 10_000] {
        let r = counterexample_demo(x)?;
        let floor = x as f64 / (2.0 * (x as f64).ln());
        ok &= r.sum == 0.0 && r.pseudo_lower_bound > floor;
        parts.push(format!("X={x}: sum {} vs product {:.1} > {:.1}", r.sum, r.pseudo_lower_bound, floor));
    }
    Ok((ok, parts.join("; ")))
}

fn c11_dihedral() -> Result<Check> {
    let mut l2_fail = 0;
    let mut l1_fail = 0;
    let mut count = 0;
    for n in 3..=50 {
        for spec in DihedralSpec::all(n)? {
            count += 1;
            if dihedral_char_average_exact(spec, 2)? != Some(Rational64::from_integer(1)) {
                l2_fail += 1;
            }
            if dihedral_char_average(spec, 1)? >= 1.0 {
                l1_fail += 1;
            }
        }
    }
    let d6 = dihedral_char_average_exact(DihedralSpec::new(3, 1)?, 1)?;
    let ok = l2_fail == 0 && l1_fail == 0 && d6 == Some(Rational64::new(2, 3));
    let d6 = d6.map_or("irrational".to_string(), |q| q.to_string());
    Ok((ok, format!("{count} representations: L2 failures {l2_fail}, L1 failures {l1_fail}; D6 L1 = {d6}")))
}

fn c12_cm_correlation() -> Result<Check> {
    let cm = EigenProvider::closed_form(FormSpec::CMGaussian)?;
    let sum = eval_multiplicative(&"x^2 + 1".parse()?, 100_000, &cm)?;
    let ratios: Vec<(u64, f64)> = sum.series.checkpoints.iter().map(|&(x, v)| (x, v / x as f64)).collect();
    let tail = &ratios[ratios.len().saturating_sub(5)..];
    let decreasing = tail.len() == 5 && tail.windows(2).all(|w| w[1].1 < w[0].1);
    let shown: Vec<String> = tail.iter().map(|(x, r)| format!("{x}:{r:.4}")).collect();
    Ok((
        decreasing && sum.reconstruction_failures == 0 && sum.series.final_value().is_finite(),
        format!("failures {}, sum/X tail {}", sum.reconstruction_failures, shown.join(" ")),
    ))
}

fn c13_first_moment(ctx: &mut Context) -> Result<Check> {
    let table = ctx.level1()?;
    let m = empirical_moments(&table, 1, 1_000_000)?;
    let exact = st_moment(1, MomentMeasure::SatoTate)?;
    let target = 8.0 / (3.0 * std::f64::consts::PI);
    Ok((
        (m - 0.8488).abs() <= 0.02 && (exact - target).abs() < 1e-9,
        format!("empirical {m:.4}, Sato-Tate {exact:.4}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria() {
        let out = run_all(AcceptanceConfig {
            only: vec![1, 4, 10, 11],
            cache_dir: None,
        });
        assert_eq!(out.len(), 4);
        for o in &out {
            assert!(o.check_passed, "{o}");
        }
    }
}
