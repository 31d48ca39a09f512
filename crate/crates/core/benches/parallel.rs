use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use normsurf::census::{census_members, CensusKind, CensusOptions};
use normsurf::enumeration::enumerate_vertex_surfaces_with;
use normsurf::families::{closed_c, path};
use normsurf::par::Exec;

fn census_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("census_batch");
    group.sample_size(10);
    for (label, jobs) in [("sequential", 1), ("parallel", 0)] {
        let opts = CensusOptions {
            jobs,
            ..CensusOptions::default()
        };
        group.bench_with_input(BenchmarkId::new(label, "n3-bounded"), &opts, |b, opts| {
            b.iter(|| census_members(3, CensusKind::Bounded, opts).unwrap().len())
        });
    }
    group.finish();
}

fn dd_pair_loop(c: &mut Criterion) {
    let mut group = c.benchmark_group("dd_pair_loop");
    group.sample_size(10);
    let inputs = [("P8", path(8)), ("C9", closed_c(9))];
    for (name, t) in &inputs {
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, name), t, |b, t| {
                b.iter(|| enumerate_vertex_surfaces_with(t, exec).unwrap().sigma())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, census_batch, dd_pair_loop);
criterion_main!(benches);
