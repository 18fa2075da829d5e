use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use jres_bench::{perturbation, roots, CLASSES};
use jres_core::inverse::invert_from_resonances;
use jres_core::jost::jost_function;
use jres_core::poly::poly_roots;
use jres_core::spectral::{phase_shift, spectral_data, validate_rk};
use jres_core::Tolerances;

fn forward(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("forward");
    for k in CLASSES {
        let q = perturbation(k);
        g.bench_with_input(BenchmarkId::new("jost", k), &q, |b, q| {
            b.iter(|| jost_function(black_box(q), &tol).unwrap())
        });
        let psi = jost_function(&q, &tol).unwrap();
        g.bench_with_input(BenchmarkId::new("roots", k), &psi, |b, psi| {
            b.iter(|| poly_roots(black_box(psi), &tol).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("spectral_data", k), &q, |b, q| {
            b.iter(|| spectral_data(black_box(q), &tol).unwrap())
        });
    }
    g.finish();
}

fn inverse(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("inverse");
    for k in CLASSES {
        let r = roots(k);
        g.bench_with_input(BenchmarkId::new("validate", k), &r, |b, r| {
            b.iter(|| validate_rk(black_box(r), &tol))
        });
        g.bench_with_input(BenchmarkId::new("resonances", k), &r, |b, r| {
            b.iter(|| invert_from_resonances(black_box(r), &tol).unwrap())
        });
    }
    g.finish();
}

fn phase(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("phase");
    for k in CLASSES {
        let psi = jost_function(&perturbation(k), &tol).unwrap();
        g.bench_with_input(BenchmarkId::new("profile_256", k), &psi, |b, psi| {
            b.iter(|| phase_shift(black_box(psi), 256, &tol).unwrap())
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = forward, inverse, phase
}
criterion_main!(benches);
