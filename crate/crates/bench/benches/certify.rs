use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ghzcert::constructions::{c333, c444_weight4, odd_d};
use ghzcert::oracle::oracle_verdict;
use ghzcert::{build_graph, build_path_graph, certify_via_graphs, OracleOptions, Partition};

fn graphs(c: &mut Criterion) {
    let odd7 = odd_d(7).unwrap();
    let c444 = c444_weight4();
    c.bench_function("graph/odd7/full", |b| b.iter(|| build_graph(black_box(&odd7), Partition::A)));
    c.bench_function("graph/c444/path", |b| b.iter(|| build_path_graph(black_box(&c444), Partition::A)));
    c.bench_function("certify/odd7/graphs", |b| b.iter(|| certify_via_graphs(black_box(&odd7))));
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let c333 = c333();
    let c444 = c444_weight4();
    let opts = OracleOptions::default();
    group.bench_function("c333/A", |b| b.iter(|| oracle_verdict(black_box(&c333), Partition::A, &opts)));
    group.bench_function("c444/A", |b| b.iter(|| oracle_verdict(black_box(&c444), Partition::A, &opts)));
    group.finish();
}

criterion_group!(benches, graphs, oracle);
criterion_main!(benches);
