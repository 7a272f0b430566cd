mod common;

use common::{q, qi, series_exp};
use latblock::lattice::random_gamma;
use latblock::numeric::rational::to_f64;
use latblock::sl2::{
    a_of_lambda, curve_point, exp_sl2, log_sl2, modified_time, power_t, time_from_lambda, Branch,
    Mat2, ModifiedTime, TraceClass,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::E;

fn traceless(a: f64, b: f64, c: f64) -> Mat2<f64> {
    Mat2::new(a, b, c, -a)
}

fn close(a: &Mat2<f64>, b: &Mat2<f64>, tol: f64) -> bool {
    a.max_abs_diff(b) < tol
}

#[test]
fn exponential_examples() {
    assert_eq!(exp_sl2(&Mat2::zero()), Mat2::identity());
    assert!(close(
        &exp_sl2(&traceless(1.0, 0.0, 0.0)),
        &Mat2::diag(E, 1.0 / E),
        1e-14
    ));
    let (c, s) = (1f64.cosh(), 1f64.sinh());
    let hyp = exp_sl2(&traceless(0.0, 1.0, 1.0));
    assert!(close(&hyp, &Mat2::new(c, s, s, c), 1e-14));
    assert!(close(&hyp, &series_exp(&traceless(0.0, 1.0, 1.0)), 1e-10));
    let ell = exp_sl2(&traceless(0.0, 1.0, -1.0));
    assert!(close(
        &ell,
        &Mat2::new(1f64.cos(), 1f64.sin(), -1f64.sin(), 1f64.cos()),
        1e-14
    ));
    assert!(close(&ell, &series_exp(&traceless(0.0, 1.0, -1.0)), 1e-10));
}

#[test]
fn logarithm_examples() {
    let d = log_sl2(&Mat2::diag(E, 1.0 / E)).unwrap();
    assert!(close(&d.x, &traceless(1.0, 0.0, 0.0), 1e-12));
    assert!((d.omega - 1.0).abs() < 1e-12);
    let id = log_sl2(&Mat2::identity()).unwrap();
    assert_eq!(id.x, Mat2::zero());
    assert_eq!(id.branch, Branch::Parabolic);
    let g = Mat2::new(2.0, 1.0, 1.0, 1.0);
    assert!(close(&exp_sl2(&log_sl2(&g).unwrap().x), &g, 1e-10));
    assert!(log_sl2(&Mat2::new(0.0, 1.0, -1.0, 0.0)).is_err());
    assert_eq!(
        TraceClass::of(&Mat2::new(0.0, 1.0, -1.0, 0.0)),
        TraceClass::Elliptic
    );
}

#[test]
fn power_and_modified_time_examples() {
    let g = Mat2::new(2.0, 1.0, 1.0, 1.0);
    assert!(close(&power_t(&g, 0.0).unwrap(), &Mat2::identity(), 1e-15));
    assert!(close(&power_t(&g, 1.0).unwrap(), &g, 1e-14));
    let d = power_t(&Mat2::diag(E * E, 1.0 / (E * E)), 0.5).unwrap();
    assert!(close(&d, &Mat2::diag(E, 1.0 / E), 1e-13));
    assert!(power_t(&Mat2::new(0.0, 1.0, -1.0, 0.0), 0.5).is_err());

    let omega = 1.5f64.acosh();
    assert_eq!(modified_time(0.0, omega), 0.0);
    assert!((modified_time(1.0, omega) - 1.0).abs() < 1e-15);
    // sinh(ω/2)/sinh ω = 1/(2cosh(ω/2)) and cosh²(ω/2) = (1 + cosh ω)/2 = 5/4
    assert!((modified_time(0.5, omega) - 1.0 / 5f64.sqrt()).abs() < 1e-9);
    assert_eq!(modified_time(0.3, 0.0), 0.3);
    assert_eq!(time_from_lambda(1.0, omega), 1.0);
    assert_eq!(time_from_lambda(0.0, omega), 0.0);

    assert_eq!(a_of_lambda(0.0, 3.0), 1.0);
    assert!((a_of_lambda(1.0, 3.0) - 1.5).abs() < 1e-15);
    assert!((a_of_lambda(0.5, 3.0) - 21f64.sqrt() / 4.0).abs() < 1e-12);
}

#[test]
fn curve_point_endpoints() {
    let g = Mat2::new(qi(1), qi(0), qi(1), qi(1));
    let gamma = Mat2::new(
        BigInt::from(4),
        BigInt::from(1),
        BigInt::from(-9),
        BigInt::from(-2),
    );
    let product = g.mul(&gamma.to_rational()).to_f64();
    assert!(close(
        &curve_point(&g, &gamma, 1.0).unwrap(),
        &product,
        1e-12
    ));
    assert!(close(
        &curve_point(&g, &gamma, 0.0).unwrap(),
        &Mat2::identity(),
        1e-12
    ));
    let elliptic = Mat2::new(
        BigInt::from(0),
        BigInt::from(-1),
        BigInt::from(1),
        BigInt::from(0),
    );
    assert!(curve_point(&Mat2::identity(), &elliptic, 0.5).is_err());
}

fn entry() -> impl Strategy<Value = f64> {
    -2.0f64..2.0
}

/// Traceless matrices on the hyperbolic branch with `ω <= 3`.
fn hyperbolic() -> impl Strategy<Value = Mat2<f64>> {
    (entry(), entry(), entry())
        .prop_map(|(a, b, c)| traceless(a, b, c))
        .prop_filter("hyperbolic with ω in (0.05, 3]", |x| {
            let d = -x.det();
            d > 0.0025 && d <= 9.0
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exp_is_unimodular_and_matches_series((a, b, c) in (entry(), entry(), entry())) {
        let x = traceless(a, b, c);
        let e = exp_sl2(&x);
        prop_assert!((e.det() - 1.0).abs() < 1e-10);
        prop_assert!(close(&e, &series_exp(&x), 1e-9));
    }

    #[test]
    fn log_inverts_exp(x in hyperbolic()) {
        let back = log_sl2(&exp_sl2(&x)).unwrap();
        prop_assert_eq!(back.branch, Branch::Hyperbolic);
        prop_assert!(close(&back.x, &x, 1e-9));
    }

    #[test]
    fn time_round_trip(lambda in 0.0f64..=1.0, omega in 0.0f64..10.0) {
        let t = time_from_lambda(lambda, omega);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&t));
        prop_assert!((modified_time(t, omega) - lambda).abs() < 1e-12);
    }

    #[test]
    fn modified_time_invariant(t in 0.0f64..=1.0, trace in 2.0f64..50.0) {
        let mt = ModifiedTime::at(t, trace);
        prop_assert!(mt.invariant_residual().abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&mt.lambda));
    }

    #[test]
    fn power_is_a_semigroup(x in hyperbolic(), s in 0.0f64..=1.0, frac in 0.0f64..=1.0) {
        let g = exp_sl2(&x);
        let t = (1.0 - s) * frac;
        let lhs = power_t(&g, s).unwrap().mul(&power_t(&g, t).unwrap());
        prop_assert!(close(&lhs, &power_t(&g, s + t).unwrap(), 1e-9));
        let half = power_t(&g, 0.5).unwrap();
        prop_assert!(close(&half.mul(&half), &g, 1e-10));
    }

    #[test]
    fn curve_point_agrees_with_power(num in 1i64..6, den in 1i64..6, z in -6i64..6, seed in any::<u64>(), t in 0.0f64..=1.0) {
        let g = Mat2::new(q(num, den), qi(0), q(z, den), q(den, num));
        let mut gamma = random_gamma(&mut ChaCha8Rng::seed_from_u64(seed), 4).map(|&v| BigInt::from(v));
        let tr = to_f64(&g.mul(&gamma.to_rational()).trace());
        prop_assume!(tr.abs() >= 2.0);
        if tr < 0.0 {
            gamma = gamma.neg();
        }
        let product = g.mul(&gamma.to_rational()).to_f64();
        let c = curve_point(&g, &gamma, t).unwrap();
        prop_assert!(close(&c, &power_t(&product, t).unwrap(), 1e-12 * (1.0 + product.frobenius())));
    }
}
