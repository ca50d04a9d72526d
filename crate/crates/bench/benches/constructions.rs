use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use slo_core::{build_power, catalog, free_cdis, free_semilattice, quotient_by_rho, Limits, PowerVariant};

fn power(c: &mut Criterion) {
    let limits = Limits::default();
    let mut g = c.benchmark_group("build_power");
    for n in [3, 6, 9] {
        let base = catalog::chain_semilattice(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &base, |b, base| {
            b.iter(|| build_power(base, PowerVariant::Nonempty, &limits).unwrap())
        });
    }
    g.finish();
}

fn quotient(c: &mut Criterion) {
    let limits = Limits::default();
    let base = free_semilattice(&["x", "y", "z"]).unwrap();
    let p = build_power(&base, PowerVariant::WithEmpty, &limits).unwrap();
    c.bench_function("quotient_by_rho F_SL(3)", |b| b.iter(|| quotient_by_rho(&p).unwrap()));
}

fn cdis(c: &mut Criterion) {
    let limits = Limits::default();
    c.bench_function("free_cdis 3 generators", |b| {
        b.iter(|| free_cdis(&["x", "y", "z"], &limits).unwrap())
    });
}

criterion_group!(benches, power, quotient, cdis);
criterion_main!(benches);
