use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ontotopic::clustering::build_hierarchy;
use ontotopic::query::generate_queries;
use ontotopic::ranking::{io_degrees, rank_topics};
use ontotopic::similarity::similarity_matrix;
use ontotopic_bench::sample_schema;

fn pipeline(c: &mut Criterion) {
    let g = sample_schema();
    let sm = similarity_matrix(&g);
    let h = build_hierarchy(&sm, 0.5, 42);
    let idx = io_degrees(&g);
    let leaves = h.leaves();

    c.bench_function("similarity_matrix", |b| {
        b.iter(|| similarity_matrix(black_box(&g)))
    });
    c.bench_function("build_hierarchy", |b| {
        b.iter(|| build_hierarchy(black_box(&sm), 0.5, 42))
    });
    c.bench_function("rank_topics", |b| {
        b.iter(|| rank_topics(black_box(&leaves), &g, &sm, &idx))
    });
    c.bench_function("generate_queries", |b| {
        b.iter(|| {
            for leaf in &leaves {
                black_box(generate_queries(leaf, &g, &sm, &idx, 0.2).unwrap());
            }
        })
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
