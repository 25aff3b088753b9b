//! Compares multi-seed batch comparison throughput with and without the
//! rayon-backed cell executor. Build with and without `--features parallel`
//! (default on) to contrast: the `sequential` group is always available.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use depguard::harness::{self, Scenario};

fn bench_scenario() -> Scenario {
    let doc = serde_json::json!({
        "name": "bench",
        "nodes": [
            {"id": 0, "position": [0.0, 0.0], "role": "PresenceSensor"},
            {"id": 1, "position": [8.0, 0.0], "role": "Relay"},
            {"id": 2, "position": [16.0, 0.0], "role": "Relay"},
            {"id": 3, "position": [24.0, 0.0], "role": "Relay"},
            {"id": 4, "position": [32.0, 0.0], "role": "LightActuator"}
        ],
        "environment": {"reference_loss": 55.0},
        "presence_script": [
            {"tick": 20, "occupied": true},
            {"tick": 60, "occupied": false},
            {"tick": 100, "occupied": true}
        ]
    });
    harness::load_scenario_str(&doc.to_string()).expect("bench scenario valid")
}

fn batch_runs(c: &mut Criterion) {
    let scenario = bench_scenario();
    let seeds: Vec<u64> = (1..=8).collect();
    let ticks = 200;

    let mut group = c.benchmark_group("compare_batch");
    group.sample_size(10);
    group.bench_function("default_executor", |b| {
        b.iter(|| black_box(harness::compare(&scenario, &seeds, ticks).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(harness::run_all_cells_sequential(&scenario, &seeds, ticks))
        })
    });
    group.finish();
}

criterion_group!(benches, batch_runs);
criterion_main!(benches);
