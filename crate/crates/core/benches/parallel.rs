use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rainbow_core::decomposition::{decompose_with, random_partition, verify_lemma4_with, DecompositionParams};
use rainbow_core::generators::{color_one_factorization, gen_complete, gen_random_regular};
use rainbow_core::harness::{run_experiment_with, ExperimentSpec};
use rainbow_core::spectral::cheeger_exact_with;
use rainbow_core::Exec;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn cheeger(c: &mut Criterion) {
    let g = gen_random_regular(18, 5, 1).unwrap();
    let mut group = c.benchmark_group("cheeger_exact");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::new(name, g.n()), |b| {
            b.iter(|| cheeger_exact_with(&g, 20, exec).unwrap())
        });
    }
    group.finish();
}

fn lemma4(c: &mut Criterion) {
    let g = color_one_factorization(&gen_complete(18)).unwrap();
    let params = DecompositionParams::new(1.0);
    let parts = random_partition(&g, 3, 7).unwrap();
    let mut group = c.benchmark_group("verify_lemma4");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| verify_lemma4_with(&g, &parts, &params, exec).unwrap())
        });
    }
    group.finish();
}

fn decompose(c: &mut Criterion) {
    let g = color_one_factorization(&gen_complete(32)).unwrap();
    let params = DecompositionParams::new(2.0).with_seed(11);
    let mut group = c.benchmark_group("decompose");
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| decompose_with(&g, &params, exec).unwrap()));
    }
    group.finish();
}

fn experiment(c: &mut Criterion) {
    let spec = ExperimentSpec::from_json(
        br#"{"family": {"kind": "regular", "n": 40, "d": 12}, "coloring": "bounded:2", "c": 1.0,
            "trials": 32, "seed": 5, "max_retries": 10, "enforce_color_cap": false}"#,
    )
    .unwrap();
    let mut group = c.benchmark_group("experiment");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| run_experiment_with(&spec, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, cheeger, lemma4, decompose, experiment);
criterion_main!(benches);
