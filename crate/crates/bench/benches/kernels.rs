use criterion::{black_box, criterion_group, criterion_main, Criterion};

use heckesum::analysis::{delta_constant, prime_sum};
use heckesum::eigenvalues::{build_table, EigenProvider};
use heckesum::factorsieve::{eval_multiplicative, ValueSieve};
use heckesum::polyarith::{rho_table, roots_mod_p};
use heckesum::{FormSpec, Poly, SumKind};

fn poly(text: &str) -> Poly {
    text.parse().unwrap()
}

fn eigen_tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("tables");
    g.sample_size(10);
    g.bench_function("tau to 2^17", |b| {
        b.iter(|| build_table(FormSpec::Level1Holomorphic { weight: 12 }, black_box(1 << 17)).unwrap())
    });
    g.bench_function("cm to 10^6", |b| b.iter(|| build_table(FormSpec::CMGaussian, black_box(1_000_000)).unwrap()));
    g.finish();
}

fn root_finding(c: &mut Criterion) {
    let cubic = poly("x^3 + x + 1");
    let quartic = poly("x^4 + 1");
    c.bench_function("roots cubic near 2^40", |b| {
        b.iter(|| roots_mod_p(&cubic, black_box(1_099_511_627_791)).unwrap())
    });
    c.bench_function("roots quartic near 2^40", |b| {
        b.iter(|| roots_mod_p(&quartic, black_box(1_099_511_627_803)).unwrap())
    });
    let mut g = c.benchmark_group("rho");
    g.sample_size(10);
    g.bench_function("x^3-2 to 10^5", |b| b.iter(|| rho_table(&poly("x^3 - 2"), black_box(100_000)).unwrap()));
    g.finish();
}

fn value_sieve(c: &mut Criterion) {
    let p = poly("x^2 + 1");
    let sieve = ValueSieve::new(&p, 1 << 20).unwrap();
    let mut g = c.benchmark_group("value sieve");
    g.sample_size(10);
    g.bench_function("x^2+1 one block at 2^20", |b| b.iter(|| sieve.block(black_box(31))));
    let cm = EigenProvider::closed_form(FormSpec::CMGaussian).unwrap();
    g.bench_function("cm along x^2+1 to 10^5", |b| {
        b.iter(|| eval_multiplicative(&p, black_box(100_000), &cm).unwrap())
    });
    g.finish();
}

fn analysis(c: &mut Criterion) {
    c.bench_function("delta on [-1,2]", |b| b.iter(|| delta_constant(-1.0, black_box(2.0)).unwrap()));
    let cm = EigenProvider::closed_form(FormSpec::CMGaussian).unwrap();
    let mut g = c.benchmark_group("prime sums");
    g.sample_size(10);
    g.bench_function("cm S to 10^6", |b| b.iter(|| prime_sum(&cm, SumKind::S, black_box(1_000_000)).unwrap()));
    g.finish();
}

criterion_group!(benches, eigen_tables, root_finding, value_sieve, analysis);
criterion_main!(benches);
