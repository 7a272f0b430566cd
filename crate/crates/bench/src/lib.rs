//! Shared fixtures for the `latblock` benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latblock::evade::BlockingCandidate;
use latblock::lattice::{random_gamma, CosetRep};
use latblock::numeric::rational::int;
use latblock::quat::{exp_quat, quat_candidate, QuatAlgebra, QuatMetric, Quaternion, TangentVec};
use latblock::sl2::{exp_sl2, Mat2};

pub fn random_traceless(rng: &mut ChaCha8Rng, spread: f64) -> Mat2<f64> {
    let a = rng.gen_range(-spread..=spread);
    Mat2::new(
        a,
        rng.gen_range(-spread..=spread),
        rng.gen_range(-spread..=spread),
        -a,
    )
}

/// `g·γ` for a random `g = exp(X)` and `γ ∈ SL(2, Z)` with entries up to `bound`.
pub fn lattice_translates(seed: u64, count: usize, bound: i64) -> Vec<Mat2<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = exp_sl2(&random_traceless(&mut rng, 1.0));
            g.mul(&random_gamma(&mut rng, bound).map(|&v| v as f64))
        })
        .collect()
}

/// The coset of `[[1, 0], [1, 1]]`.
pub fn unipotent_target() -> CosetRep {
    CosetRep::new(Mat2::new(int(1), int(0), int(1), int(1))).expect("unimodular")
}

/// `count` valid candidate points for [`unipotent_target`].
pub fn sl2_candidate(seed: u64, count: usize) -> BlockingCandidate {
    let target = unipotent_target().to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let p = exp_sl2(&random_traceless(&mut rng, 1.0));
        if BlockingCandidate::for_sl2(vec![p.clone()], 1e-3, &target).is_ok() {
            points.push(p);
        }
    }
    BlockingCandidate::for_sl2(points, 1e-3, &target).expect("points were validated one by one")
}

/// `3 + 2i` in `H^{2,3}`.
pub fn quaternion_target() -> Quaternion<latblock::numeric::BigRational> {
    let alg = QuatAlgebra::new(2, 3).expect("positive parameters");
    Quaternion::new(alg, int(3), int(2), int(0), int(0))
}

/// `count` valid quaternionic candidate points for [`quaternion_target`].
pub fn quat_candidate_set(seed: u64, count: usize) -> BlockingCandidate {
    let g = quaternion_target();
    let metric = QuatMetric::new(g.alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let u = TangentVec::new(
            g.alg,
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        let p = exp_quat(&u);
        if quat_candidate(std::slice::from_ref(&p), 1e-3, &metric, &g).is_ok() {
            points.push(p);
        }
    }
    quat_candidate(&points, 1e-3, &metric, &g).expect("points were validated one by one")
}
