use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hyperloc::arith::{q, qf, Gq};
use hyperloc::conic::{trace_shrinking_with, ConicSheaf, Equivariant};
use hyperloc::fan::Fan;
use hyperloc::lefschetz::{local_trace_function_with, TraceOptions};
use hyperloc::par::Exec;
use hyperloc::spectral::Subspace;
use hyperloc::fixtures;
use hyperloc::matrix::QMatrix;
use hyperloc::suite::{euler_suite, localization_suite};

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("localization_suite_64");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_function(format!("{exec:?}"), |b| b.iter(|| black_box(localization_suite(3, 64, exec))));
    }
    g.finish();

    let mut g = c.benchmark_group("euler_suite_200");
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_function(format!("{exec:?}"), |b| b.iter(|| black_box(euler_suite(3, 200, exec))));
    }
    g.finish();
}

fn per_cone(c: &mut Criterion) {
    let fan = Fan::orthants(3);
    let sheaf = ConicSheaf::constant(fan.clone(), 0);
    let mut a = QMatrix::identity(3).scale(&qf(1, 2));
    a[(2, 2)] = q(3);
    let eta = Equivariant::scalar(&sheaf, a, Gq::int(1)).unwrap();
    let s = Subspace::span(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
    let mut g = c.benchmark_group("trace_shrinking_orthants3");
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_function(format!("{exec:?}"), |b| b.iter(|| black_box(trace_shrinking_with(&sheaf, &eta, &s, exec))));
    }
    g.finish();

    let model = fixtures::twisted(6).component;
    let mut g = c.benchmark_group("local_trace_twisted6");
    for exec in [Exec::Sequential, Exec::Parallel] {
        let opts = TraceOptions { exec, ..Default::default() };
        g.bench_function(format!("{exec:?}"), |b| b.iter(|| black_box(local_trace_function_with(&model, opts))));
    }
    g.finish();
}

criterion_group!(benches, suites, per_cone);
criterion_main!(benches);
