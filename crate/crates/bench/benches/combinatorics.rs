use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qgraph::circuit::g_family_verdict;
use qgraph::coloring::{enumerate_admissible, realize_g};
use qgraph::fixtures;

fn colorings(c: &mut Criterion) {
    let star = fixtures::star(&[1.0; 12]);
    c.bench_function("star12_enumeration", |b| b.iter(|| enumerate_admissible(black_box(&star)).unwrap()));
    let cs = enumerate_admissible(&star).unwrap();
    c.bench_function("star12_realize_all", |b| {
        b.iter(|| cs.iter().map(|c| realize_g(&star, c).unwrap()).count())
    });
}

fn circuits(c: &mut Criterion) {
    let (hash, _) = fixtures::hash_graph(3, 3, 1.0, 0.5);
    c.bench_function("hash3x3_verdict", |b| b.iter(|| g_family_verdict(black_box(&hash), None).unwrap()));
}

criterion_group!(benches, colorings, circuits);
criterion_main!(benches);
