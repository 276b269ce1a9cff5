use std::hint::black_box;

use bundled::generate::{generate, GeneratorSpec};
use bundled::oracle::brute_force_min_rectangulation;
use bundled::*;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn net(family: &str, seed: u64) -> DualNet {
    let spec = GeneratorSpec {
        family: family.parse().unwrap(),
        seed,
    };
    net_of(&build_planarization(&generate(&spec).unwrap()).unwrap()).unwrap()
}

fn greedy(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy");
    for fam in ["grid:8x8", "circular:12", "toothed:10"] {
        let n = net(fam, 3);
        g.bench_with_input(BenchmarkId::from_parameter(fam), &n, |b, n| {
            b.iter(|| {
                let cs = greedy_rectangulate(n, &CutSet::default(), VertexOrder::ById);
                black_box(extract_rectangulation(n, &cs).unwrap().r)
            })
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(20);
    for fam in ["grid:4x4", "circular:8"] {
        let n = net(fam, 56);
        g.bench_with_input(BenchmarkId::from_parameter(fam), &n, |b, n| {
            b.iter(|| black_box(brute_force_min_rectangulation(n, 24).unwrap().r_opt))
        });
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let n = net("circular-bipartite:10", 6);
    c.bench_function("bipartite/circular-bipartite:10", |b| {
        b.iter(|| black_box(bipartite_pipeline(&n, VertexOrder::ById).unwrap().gain))
    });
}

criterion_group!(benches, greedy, oracle, pipeline);
criterion_main!(benches);
