use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kerov_core::enumeration::EnumContext;
use kerov_core::perm::{enumerate_symmetric_group, Shard};

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("symmetric_group_sweep");
    for k in [6usize, 7, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| {
                let mut cycles = 0usize;
                enumerate_symmetric_group(k, Shard::whole())
                    .unwrap()
                    .visit(|images| {
                        cycles += kerov_core::perm::cycle_count_of_images(images);
                    });
                cycles
            })
        });
    }
    group.finish();
}

fn counts(c: &mut Criterion) {
    let ctx = EnumContext {
        shard_count: 1,
        ..EnumContext::default()
    };
    let mut group = c.benchmark_group("coefficient_counts");
    group.bench_function("count_linear_k7_l4", |b| {
        b.iter(|| ctx.count_linear(7, 4).unwrap().count)
    });
    group.bench_function("count_square_k7_2_2", |b| {
        b.iter(|| ctx.count_square(7, 2, 2).unwrap().count)
    });
    group.bench_function("enumerate_x_k7_2_2", |b| {
        b.iter(|| ctx.enumerate_x(7, 2, 2).unwrap().len())
    });
    group.finish();
}

criterion_group!(benches, sweep, counts);
criterion_main!(benches);
