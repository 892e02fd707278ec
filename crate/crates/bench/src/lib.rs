use criterion::{BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use cliquelab::amp::{amp_init, amp_step};
use cliquelab::graph::gen_gnp;
use cliquelab::greedy::{early_stop_search, sm0, smi, EarlyStopLevel};
use cliquelab::spectral::{planted_instance, Operator, SpectralConfig};
use cliquelab::SeededRng;

pub fn benchmarks(c: &mut Criterion) {
    generate(c);
    greedy(c);
    spectral(c);
    amp(c);
}

fn generate(c: &mut Criterion) {
    let mut group = c.benchmark_group("gen_gnp");
    for n in [1_000usize, 4_000] {
        group.throughput(Throughput::Elements((n * (n - 1) / 2) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gen_gnp(n, 0.5, black_box(7)).unwrap())
        });
    }
    group.finish();
}

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy");
    for n in [1_000usize, 10_000] {
        let g = gen_gnp(n, 0.5, 1).unwrap();
        let mut rng = SeededRng::new(2);
        group.bench_with_input(BenchmarkId::new("sm0", n), &g, |b, g| b.iter(|| sm0(g, &mut rng, None).unwrap()));
    }
    let g = gen_gnp(500, 0.5, 1).unwrap();
    let mut rng = SeededRng::new(3);
    group.sample_size(10);
    group.bench_function("sm1/500", |b| b.iter(|| smi(&g, 1, &mut rng).unwrap()));

    let (g, _) = planted_instance(10_000, 0.5, 80, 4).unwrap();
    group.bench_function("sm1-es/10000/alpha0.8", |b| {
        b.iter(|| early_stop_search(&g, EarlyStopLevel::Vertices, 17, &mut SeededRng::new(5)).unwrap())
    });
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    for n in [2_500usize, 10_000] {
        let g = gen_gnp(n, 0.5, 1).unwrap();
        let cfg = SpectralConfig::plus_minus(true);
        let mut op = Operator::new(&g, &cfg).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut y = vec![0.0; n];
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| op.apply(black_box(&x), &mut y).unwrap())
        });
    }
    group.finish();
}

fn amp(c: &mut Criterion) {
    let mut group = c.benchmark_group("amp_step");
    group.sample_size(10);
    for n in [1_000usize, 4_000] {
        let (g, _) = planted_instance(n, 0.5, (n as f64).sqrt() as usize, 1).unwrap();
        let mut state = amp_init::<f32, _>(n, (n as f64).sqrt() as usize, &mut SeededRng::new(2)).unwrap();
        group.throughput(Throughput::Elements((n * (n - 1)) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| amp_step(&mut state, &g).unwrap()));
    }
    group.finish();
}
