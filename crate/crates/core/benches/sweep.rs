use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rm_pmepr::algebra::Modulus;
use rm_pmepr::constructions::{alpha_beta_family, SweepMode};
use rm_pmepr::exec::Executor;
use rm_pmepr::search::{run_search, SearchConfig};
use rm_pmepr::spectral::EnvelopeConfig;
use rm_pmepr::sweep::sweep_coset;

fn coset_sweep(c: &mut Criterion) {
    let q = Modulus::new(8).unwrap();
    let rep = alpha_beta_family(q, 4, 3).unwrap().swap_remove(3).rep;
    let mut g = c.benchmark_group("sweep_coset q=8 m=3");
    g.sample_size(10);
    for (name, ex) in [("sequential", Executor::sequential()), ("parallel", Executor::new(0).unwrap())] {
        g.bench_with_input(BenchmarkId::from_parameter(name), &ex, |b, ex| {
            b.iter(|| sweep_coset(&rep.gbf, SweepMode::Exhaustive, EnvelopeConfig::default(), ex).unwrap())
        });
    }
    g.finish();
}

fn kernel_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_search q=2 k=3");
    g.sample_size(10);
    for (name, workers) in [("sequential", 1usize), ("parallel", 0)] {
        let cfg = SearchConfig { workers, ..SearchConfig::new(2, 3) };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| run_search(cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, coset_sweep, kernel_search);
criterion_main!(benches);
