use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use subgrad::problems::projection::{project_l1_ball, project_l1_ball_pivot};
use subgrad_bench::normal_vec;

fn bench_l1_projection(c: &mut Criterion) {
    let mut group = c.benchmark_group("l1_projection");
    for dim in [50usize, 500, 5000] {
        let v = normal_vec(dim, 17);
        let tau = (dim as f64).sqrt() * 0.1;
        group.bench_with_input(BenchmarkId::new("sort", dim), &v, |b, v| {
            b.iter(|| project_l1_ball(black_box(v), tau).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pivot", dim), &v, |b, v| {
            b.iter(|| project_l1_ball_pivot(black_box(v), tau).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_l1_projection);
criterion_main!(benches);
