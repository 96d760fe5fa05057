use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gridreach::check::random_block;
use gridreach::gadget::transform;
use gridreach::{bfs_reachable, solve, Mode, SolveConfig};
use gridreach_bench::square;

fn end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for side in [8u32, 27, 64] {
        let g = square(side, 0.5);
        for mode in [Mode::Materialized, Mode::Streamed] {
            let cfg = SolveConfig {
                mode,
                ..SolveConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(mode.to_string(), side), &g, |b, g| {
                b.iter(|| solve(g, &cfg).expect("bench instances solve").answer)
            });
        }
        group.bench_with_input(BenchmarkId::new("bfs", side), &g, |b, g| {
            b.iter(|| bfs_reachable(g, g.s(), g.t()))
        });
    }
    group.finish();
}

fn block_transform(c: &mut Criterion) {
    let blocks: Vec<_> = (0..32).map(|seed| random_block(seed, 8).2).collect();
    c.bench_function("transform 32 blocks", |b| {
        b.iter(|| {
            blocks
                .iter()
                .map(|c| transform(c).vertex_count())
                .sum::<usize>()
        })
    });
}

criterion_group!(benches, end_to_end, block_transform);
criterion_main!(benches);
