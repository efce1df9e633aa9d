use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use zkmatch_bench::{matching, DOCS};
use zkmatch_core::{corpus_match, MatchAlgorithm};

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("corpus_match");
    for n in [256, 1024, 4096] {
        let m = matching(n);
        group.throughput(Throughput::Bytes((n * DOCS) as u64));
        for (name, algo) in [
            ("naive", MatchAlgorithm::Naive),
            ("rabin_karp", MatchAlgorithm::RabinKarp),
        ] {
            group.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| {
                b.iter(|| corpus_match(black_box(&m.corpus), &m.patterns, &m.params, algo).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
