//! Enumeration kernels on the default rayon pool versus a single-thread
//! pool. Build with `--no-default-features` to time the purely sequential
//! code path instead.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grassweight::classify7::{representative, sample_orbits, ClassId};
use grassweight::gf::Field;
use grassweight::grassmann::{codeword_weight_direct, exhaustive_spectrum, triple_count_weight, WeightStrategy};
use grassweight::weightvar::rank_profile;
use rayon::ThreadPool;

fn pools() -> Vec<(String, ThreadPool)> {
    let n = rayon::current_num_threads();
    let mut out = vec![("1-thread".to_string(), rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap())];
    if n > 1 {
        out.push((format!("{n}-threads"), rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()));
    }
    out
}

fn omega(i: u8, q: u32) -> grassweight::AltForm {
    let f = Field::new(q).unwrap();
    representative(ClassId::for_field(i, f).unwrap(), f).unwrap()
}

fn direct_weight(c: &mut Criterion) {
    let mut g = c.benchmark_group("direct_weight_c37");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    for q in [2u32, 3] {
        let w = omega(10, q);
        for (name, pool) in pools() {
            g.bench_with_input(BenchmarkId::new(name, format!("q={q}")), &w, |b, w| {
                b.iter(|| pool.install(|| codeword_weight_direct(black_box(w)).unwrap()))
            });
        }
    }
    g.finish();
}

fn weight_varieties(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank_profile_p6");
    g.sample_size(10);
    for q in [3u32, 5] {
        let w = omega(10, q);
        for (name, pool) in pools() {
            g.bench_with_input(BenchmarkId::new(name, format!("q={q}")), &w, |b, w| {
                b.iter(|| pool.install(|| rank_profile(black_box(w)).unwrap()))
            });
        }
    }
    g.finish();
}

fn triples(c: &mut Criterion) {
    let mut g = c.benchmark_group("triple_count_gf2");
    g.sample_size(10);
    let w = omega(11, 2);
    for (name, pool) in pools() {
        g.bench_function(name, |b| b.iter(|| pool.install(|| triple_count_weight(black_box(&w)).unwrap())));
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum_c26_q2");
    g.sample_size(10);
    let f = Field::new(2).unwrap();
    for (name, pool) in pools() {
        g.bench_function(name, |b| {
            b.iter(|| pool.install(|| exhaustive_spectrum(2, 6, f, WeightStrategy::Direct).unwrap()))
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_orbits_q2");
    g.sample_size(10);
    let f = Field::new(2).unwrap();
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new(name, 2000), |b| {
            b.iter(|| pool.install(|| sample_orbits(f, 2000, black_box(1)).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, direct_weight, weight_varieties, triples, spectrum, monte_carlo);
criterion_main!(benches);
