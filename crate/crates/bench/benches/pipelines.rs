//! Benchmarks for the hot paths: dataset generation, the counterfactual
//! forest, the three root-split searches, and a full pipeline run.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use vg_bench::{bench_config, bench_dataset};
use vg_core::counterfactual::{estimate_ite, Backend, CounterfactualConfig};
use vg_core::methods::{self, ite_for, Method};
use vg_core::sim::{gen_scenario_dataset, Scenario};
use vg_core::tree::{select_split_cart, select_variable_guide};

fn bench_generation(c: &mut Criterion) {
    let scn = Scenario::preset("mix-prognostic").unwrap();
    let mut seed = 0u64;
    c.bench_function("gen_scenario_dataset n=400 p=15", |b| {
        b.iter(|| {
            seed += 1;
            black_box(gen_scenario_dataset(&scn, seed))
        })
    });
}

fn bench_counterfactual(c: &mut Criterion) {
    let (d, _) = bench_dataset(1);
    let forest = CounterfactualConfig {
        n_trees: 100,
        ..Default::default()
    };
    c.bench_function("counterfactual forest fit+predict (100 trees)", |b| {
        b.iter(|| black_box(estimate_ite(&d, &forest, 7)))
    });
    let single = CounterfactualConfig {
        backend: Backend::SingleTree,
        ..Default::default()
    };
    c.bench_function("counterfactual single-tree fit+predict", |b| {
        b.iter(|| black_box(estimate_ite(&d, &single, 7)))
    });
}

fn bench_split_searches(c: &mut Criterion) {
    let (d, _) = bench_dataset(2);
    let dc = d.sorted_by_name();
    let cfg = bench_config(60);
    let ite = ite_for(&dc, &cfg, 3);
    let rows: Vec<usize> = (0..dc.n()).collect();
    c.bench_function("unbiased variable selection (root, n=400 p=14)", |b| {
        b.iter(|| black_box(select_variable_guide(&rows, &dc, &ite.values)))
    });
    c.bench_function("exhaustive joint split search (root, n=400 p=14)", |b| {
        b.iter(|| black_box(select_split_cart(&rows, &dc, &ite.values)))
    });
    c.bench_function("interaction root analysis (n=400 p=14)", |b| {
        b.iter(|| black_box(methods::root_analysis_gi(&dc, &cfg.stop)))
    });
}

fn bench_pipeline(c: &mut Criterion) {
    let (d, _) = bench_dataset(3);
    let cfg = bench_config(60);
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("run_vg (60 trees)", |b| {
        b.iter_batched(
            || d.clone(),
            |d| black_box(methods::run_method(Method::Vg, &d, &cfg, 5).unwrap()),
            BatchSize::LargeInput,
        )
    });
    group.bench_function("run_gi", |b| {
        b.iter_batched(
            || d.clone(),
            |d| black_box(methods::run_method(Method::Gi, &d, &cfg, 5).unwrap()),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_generation,
    bench_counterfactual,
    bench_split_searches,
    bench_pipeline
);
criterion_main!(benches);
