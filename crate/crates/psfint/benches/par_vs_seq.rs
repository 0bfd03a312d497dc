//! Throughput of the two data-parallel cores against their sequential
//! fallbacks: the cross-prover corpus sweep and the bounded model search.

use criterion::{criterion_group, criterion_main, Criterion};
use psfint::corpus::{equivalence_check, equivalence_check_seq, exhaustive_formulas, one_per_side};
use psfint::kripke::{semantic_decide, semantic_decide_seq};
use psfint::parse::parse_sequent;
use psfint::SearchConfig;

fn corpus_equivalence(c: &mut Criterion) {
    let corpus = one_per_side(&exhaustive_formulas(3, &["p", "q"]));
    let cfg = SearchConfig::default();
    let mut group = c.benchmark_group("equivalence_check");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| equivalence_check(&corpus, &cfg)));
    group.bench_function("sequential", |b| {
        b.iter(|| equivalence_check_seq(&corpus, &cfg))
    });
    group.finish();
}

fn model_search(c: &mut Criterion) {
    // Provable, so the search sweeps every model at the bound.
    let s = parse_sequent("=> ~~((p -> q) | (q -> p))").unwrap();
    let mut group = c.benchmark_group("semantic_decide");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| semantic_decide(&s, 4)));
    group.bench_function("sequential", |b| b.iter(|| semantic_decide_seq(&s, 4)));
    group.finish();
}

criterion_group!(benches, corpus_equivalence, model_search);
criterion_main!(benches);
