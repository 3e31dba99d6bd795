use criterion::{criterion_group, criterion_main, Criterion};
use spinorq::invariant::{build_c, duality_dims, eigen_decomposition, verify_coideal, verify_commutation, At};
use spinorq::{EvalPoint, Parity};

fn build(c: &mut Criterion) {
    c.bench_function("build C, even k = 3", |b| b.iter(|| build_c(Parity::Even, 3).unwrap()));
    c.bench_function("build C, odd k = 2", |b| b.iter(|| build_c(Parity::Odd, 2).unwrap()));
}

fn checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("checks");
    g.sample_size(10);
    let even3 = build_c(Parity::Even, 3).unwrap();
    let act = even3.action();
    g.bench_function("commutation, even k = 3", |b| b.iter(|| verify_commutation(&even3, &act).unwrap()));
    let even2 = build_c(Parity::Even, 2).unwrap();
    g.bench_function("eigenprojections, even k = 2", |b| b.iter(|| eigen_decomposition(&even2).unwrap()));
    g.bench_function("coideal, even k = 2, n = 3", |b| b.iter(|| verify_coideal(2, Parity::Even, 3, At::Symbolic).unwrap()));
    let p = EvalPoint::parse("3/2").unwrap();
    g.bench_function("duality dims, odd k = 1, n = 4", |b| b.iter(|| duality_dims(1, Parity::Odd, 4, &p).unwrap()));
    g.finish();
}

criterion_group!(benches, build, checks);
criterion_main!(benches);
