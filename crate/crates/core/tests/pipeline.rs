//! Public-API pipelines: parse, tabulate, sum, report.

use std::sync::Arc;

use heckesum::analysis::{fit_loglog, prime_sum, weighted_prime_sum};
use heckesum::eigenvalues::{build_table, cache};
use heckesum::factorsieve::{eval_multiplicative, factor_values};
use heckesum::polyarith::rho_table;
use heckesum::report::{json_report, write_eval_csv};
use heckesum::sieves::nair_bound;
use heckesum::{oracle, DirichletChar, EigenProvider, FitMode, FormSpec, Poly, SumKind};

#[test]
fn tabulated_and_closed_form_agree_on_noncuspidal_specs() {
    let spec = FormSpec::TrivialQuadratic { d: -4 };
    let table = Arc::new(build_table(spec, 50_000).unwrap());
    let from_table = EigenProvider::tabulated(table);
    let closed = EigenProvider::closed_form(spec).unwrap();
    let a = prime_sum(&from_table, SumKind::T2, 50_000).unwrap();
    let b = prime_sum(&closed, SumKind::T2, 50_000).unwrap();
    assert_eq!(a.checkpoints, b.checkpoints);
}

#[test]
fn cache_feeds_a_correlation_sum() {
    let dir = tempfile::tempdir().unwrap();
    let spec = FormSpec::Level1Holomorphic { weight: 16 };
    let table = cache::load_or_build(spec, 5000, Some(dir.path())).unwrap();
    let again = cache::load_or_build(spec, 2000, Some(dir.path())).unwrap();
    assert_eq!(table, again);
    let provider = EigenProvider::tabulated(Arc::new(table));
    let p: Poly = "x^2 + 1".parse().unwrap();
    let sum = eval_multiplicative(&p, 70, &provider).unwrap();
    let direct: f64 = (1..=70usize).map(|n| provider.table().unwrap().lambda(n * n + 1).abs()).sum();
    assert!((sum.series.final_value() - direct).abs() < 1e-9 * direct);
    let mut csv = Vec::new();
    write_eval_csv(&mut csv, &sum).unwrap();
    assert!(String::from_utf8(csv).unwrap().ends_with(&format!(",{}\n", sum.series.final_value() / 70.0)));
}

#[test]
fn weighted_and_sieve_paths_share_the_rho_table() {
    let p: Poly = "x^3 - 2".parse().unwrap();
    let rho = rho_table(&p, 200_000).unwrap();
    let iso = EigenProvider::closed_form(FormSpec::Isobaric {
        psi1: DirichletChar::Trivial,
        psi2: DirichletChar::Trivial,
    })
    .unwrap();
    // |lambda| = 2 everywhere, so the weighted sum is sum rho(p) / p
    let w = weighted_prime_sum(&iso, &rho, 200_000).unwrap();
    let want: f64 = rho.entries().iter().map(|&(q, r)| r as f64 / q as f64).sum();
    assert!((w.final_value() - want).abs() < 1e-9);
    let b = nair_bound(|_| 2.0, &rho, 200_000).unwrap();
    assert!((b.exponent_sum - want).abs() < 1e-9);
    let fit = fit_loglog(&w, (1000, 200_000), FitMode::PrimeSum).unwrap();
    assert!((fit.slope - 1.0).abs() < 0.1, "{}", fit.slope);
    let v = json_report("fit", &fit).unwrap();
    assert_eq!(v["report"], "fit");
}

#[test]
fn factorizations_reproduce_values() {
    let p: Poly = "3x^3 - 7x + 11".parse().unwrap();
    for vf in factor_values(&p, 3000).unwrap() {
        assert_eq!(vf.value, oracle::abs_value(p.coeffs(), vf.n as i64));
        assert!(vf.reconstructs());
    }
}
