use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modres::{catalog, milnor, oracle, resonance, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn special_cocycles(c: &mut Criterion) {
    let mut g = c.benchmark_group("special_cocycles");
    let inputs = [
        ("hessian_k4", catalog::hessian(), 4),
        ("monomial6_k3", catalog::monomial(6).unwrap(), 3),
        ("M3_k3", catalog::matroid_m(3).unwrap(), 3),
    ];
    for (name, m, k) in &inputs {
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(*name, mode), &exec, |b, &exec| {
                b.iter(|| resonance::special_cocycles(black_box(m), *k, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn brute_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("brute_scan");
    g.sample_size(10);
    let m = catalog::full_monomial(3).unwrap();
    for (mode, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("full_monomial3_k3", mode), &exec, |b, &exec| {
            b.iter(|| oracle::brute_special_cocycles(black_box(&m), 3, exec).unwrap())
        });
    }
    g.finish();
}

fn delta(c: &mut Criterion) {
    let mut g = c.benchmark_group("delta_polynomial");
    let m = catalog::matroid_mk(5, 2).unwrap();
    for (mode, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("MK_5_2", mode), &exec, |b, &exec| {
            b.iter(|| milnor::delta_polynomial(black_box(&m), false, exec))
        });
    }
    g.finish();
}

criterion_group!(benches, special_cocycles, brute_scan, delta);
criterion_main!(benches);
