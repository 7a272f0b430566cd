use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latblock::evade::{gen_family, refute_blocking, RefuteSettings};
use latblock::lattice::{canonical_rep, coset_distance};
use latblock::quat::{refute_blocking_quat, QuatMetric};
use latblock::sl2::{exp_sl2, Mat2};
use latblock_bench::{
    lattice_translates, quat_candidate_set, quaternion_target, random_traceless, sl2_candidate,
    unipotent_target,
};

fn analytic(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs: Vec<Mat2<f64>> = (0..256).map(|_| random_traceless(&mut rng, 2.0)).collect();
    c.bench_function("exp_sl2/256", |b| {
        b.iter(|| xs.iter().map(|x| exp_sl2(black_box(x)).x).sum::<f64>())
    });
}

fn lattice(c: &mut Criterion) {
    let translates = lattice_translates(2, 256, 1000);
    c.bench_function("canonical_rep/256", |b| {
        b.iter(|| {
            translates
                .iter()
                .map(|g| canonical_rep(black_box(g)).unwrap().x)
                .sum::<f64>()
        })
    });
    let pairs = lattice_translates(3, 64, 20);
    c.bench_function("coset_distance/63", |b| {
        b.iter(|| {
            pairs
                .windows(2)
                .map(|w| coset_distance(&w[0], &w[1]).unwrap())
                .sum::<f64>()
        })
    });
    let target = unipotent_target();
    c.bench_function("gen_family/1000", |b| {
        b.iter(|| gen_family(black_box(&target), 1000).unwrap().members.len())
    });
    let metric = QuatMetric::new(quaternion_target().alg);
    let near = lattice_translates(4, 16, 1);
    c.bench_function("quat_distance/16", |b| {
        b.iter(|| {
            near.iter()
                .map(|m| metric.distance_capped(black_box(m), 1.0).unwrap())
                .sum::<f64>()
        })
    });
}

fn refute(c: &mut Criterion) {
    let mut group = c.benchmark_group("refute");
    group.sample_size(10);
    let target = unipotent_target();
    let settings = RefuteSettings::default();
    group.bench_function("sl2/10_points", |b| {
        b.iter_batched(
            || sl2_candidate(5, 10),
            |cand| {
                refute_blocking(&target, &cand, &settings)
                    .unwrap()
                    .member
                    .index
            },
            BatchSize::SmallInput,
        )
    });
    let g = quaternion_target();
    group.bench_function("quaternion/5_points", |b| {
        b.iter_batched(
            || quat_candidate_set(6, 5),
            |cand| {
                refute_blocking_quat(&g, &cand, &settings)
                    .unwrap()
                    .member
                    .index
            },
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, analytic, lattice, refute);
criterion_main!(benches);
