use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use omd_bench::scaled_hospital;
use omd_core::oracle::{naive_chase, OracleConfig};
use omd_core::{certain_answers, chase, fixtures, parse_ontology, serialize_ontology, ChaseConfig};

fn restricted_chase(c: &mut Criterion) {
    let mut group = c.benchmark_group("chase");
    for wards in [16, 64, 256] {
        let o = scaled_hospital(wards, 7);
        group.throughput(Throughput::Elements(o.data.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(wards), &o, |b, o| {
            b.iter(|| chase(black_box(o), &ChaseConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn oracle_chase(c: &mut Criterion) {
    let o = fixtures::hospital();
    c.bench_function("oracle/hospital", |b| {
        b.iter(|| naive_chase(black_box(&o), &OracleConfig::default()).unwrap())
    });
    c.bench_function("engine/hospital", |b| {
        b.iter(|| chase(black_box(&o), &ChaseConfig::default()).unwrap())
    });
}

fn queries(c: &mut Criterion) {
    let o = scaled_hospital(256, 7);
    let result = chase(&o, &ChaseConfig::default()).unwrap();
    let mut group = c.benchmark_group("certain_answers");
    for name in ["Ward0", "Doctors"] {
        let q = o.query(name).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| certain_answers(black_box(q), &result).unwrap())
        });
    }
    group.finish();
}

fn parsing(c: &mut Criterion) {
    let text = serialize_ontology(&scaled_hospital(256, 7));
    c.bench_function("parse/256 wards", |b| {
        b.iter(|| parse_ontology(black_box(&text), "bench.omd").unwrap())
    });
}

criterion_group!(benches, restricted_chase, oracle_chase, queries, parsing);
criterion_main!(benches);
