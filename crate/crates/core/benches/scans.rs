//! Sequential against pooled execution for the scan drivers.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gbz_core::analytic::BoundaryClass;
use gbz_core::exec::Executor;
use gbz_core::models::{ChainSpec, SshSpec};
use gbz_core::scans::{boundary_grid_scan, spectral_flow, ssh_phase_scan, Axis, FlowRoute, RouteKind};
use std::hint::black_box;

fn executors() -> [(&'static str, Executor); 2] {
    [("sequential", Executor::sequential()), ("parallel", Executor::new(0))]
}

fn grid(c: &mut Criterion) {
    let spec = ChainSpec::obc(40, 1.0, 0.85).unwrap();
    let x = Axis::new("dL_over_tL", 0.0, 1.0, 16).unwrap();
    let y = Axis::new("dR_over_tR", 0.0, 1.0, 16).unwrap();
    let mut g = c.benchmark_group("boundary_grid_16x16_N40");
    g.sample_size(10);
    for (name, exec) in executors() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| black_box(boundary_grid_scan(&spec, &x, &y, exec)))
        });
    }
    g.finish();
}

fn phase(c: &mut Criterion) {
    let spec = SshSpec::pbc(20, 1.0, 1.0, 1.0, 1.0).unwrap();
    let x = Axis::new("x", 0.1, 2.0, 12).unwrap();
    let y = Axis::new("y", 0.1, 2.0, 12).unwrap();
    let mut g = c.benchmark_group("ssh_phase_12x12_M20");
    g.sample_size(10);
    for (name, exec) in executors() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| black_box(ssh_phase_scan(&spec, &x, &y, BoundaryClass::Obc, exec)))
        });
    }
    g.finish();
}

fn flow(c: &mut Criterion) {
    let spec = ChainSpec::obc(60, 1.0, 0.8).unwrap();
    let route = FlowRoute::new(RouteKind::S1, 64).unwrap();
    let mut g = c.benchmark_group("flow_S1_64_N60");
    g.sample_size(10);
    for (name, exec) in executors() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| black_box(spectral_flow(&spec, &route, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, grid, phase, flow);
criterion_main!(benches);
