use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lwae_bench::instances;
use lwae_core::refine::{default_tau, refine_to_unique};
use lwae_core::{solve, Method, DEFAULT_EPSILON};

const METHODS: [Method; 2] = [Method::Bisection, Method::CycleCancel];

fn first_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("first_solve");
    for n in [10, 20] {
        let set = instances(n, 5, 20, 42);
        for method in METHODS {
            group.bench_with_input(BenchmarkId::new(method.to_string(), n), &set, |b, set| {
                b.iter(|| {
                    for a in set {
                        solve(a, method, DEFAULT_EPSILON).unwrap();
                    }
                })
            });
        }
    }
    group.finish();
}

fn refinement(c: &mut Criterion) {
    let mut group = c.benchmark_group("refine");
    let tau = default_tau(DEFAULT_EPSILON);
    for a_max in [3, 10] {
        let set = instances(20, a_max, 20, 43);
        for method in METHODS {
            let id = BenchmarkId::new(method.to_string(), format!("n20_a{a_max}"));
            group.bench_with_input(id, &set, |b, set| {
                b.iter(|| {
                    for a in set {
                        refine_to_unique(a, method, DEFAULT_EPSILON, tau).unwrap();
                    }
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, first_solve, refinement);
criterion_main!(benches);
