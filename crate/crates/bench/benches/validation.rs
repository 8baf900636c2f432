use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use intent_shacl::harness::Tier;
use intent_shacl_bench::{corpus, environment};

fn corpus_by_tier(c: &mut Criterion) {
    let files = corpus().expect("fixture corpus loads");
    let mut group = c.benchmark_group("corpus");
    group.sample_size(10);
    for tier in Tier::ALL {
        let env = environment(tier).expect("fixture shapes load");
        let validator = env.validator();
        group.bench_with_input(BenchmarkId::new("validate-all", tier), &files, |b, files| {
            b.iter(|| files.iter().map(|(_, g)| validator.validate(g).results.len()).sum::<usize>())
        });
    }
    group.finish();
}

fn listing_files(c: &mut Criterion) {
    let files = corpus().expect("fixture corpus loads");
    let env = environment(Tier::Af).expect("fixture shapes load");
    let validator = env.validator();
    for name in ["IntentCommonModel/good/video-intent.ttl", "QuantityOntology/bad/undeclared-metric.ttl"] {
        let (_, graph) = files.iter().find(|(n, _)| n == name).expect("listing file present");
        c.bench_function(name, |b| b.iter(|| validator.validate(graph)));
    }
}

criterion_group!(benches, corpus_by_tier, listing_files);
criterion_main!(benches);
