use std::path::PathBuf;

use latblock::evade::{
    refute_blocking, replay_certificate, BlockingCandidate, CertificateKind, EvasionCertificate,
    RefuteSettings,
};
use latblock::lattice::{canonical_rep, CosetRep};
use latblock::numeric::rational::{int, parse_exact};
use latblock::quat::{
    curve_point_quat, exp_quat, find_gamma1, phi_f64, quat_candidate, refute_blocking_quat,
    QuatAlgebra, QuatMetric, Quaternion, TangentVec, GAMMA1_SEARCH_BOUND,
};
use latblock::sl2::{curve_point, exp_sl2, Mat2};
use latblock::Error;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unipotent() -> CosetRep {
    CosetRep::new(Mat2::new(int(1), int(0), int(1), int(1))).unwrap()
}

fn h23_target() -> Quaternion<num_rational::BigRational> {
    Quaternion::new(
        QuatAlgebra::new(2, 3).unwrap(),
        int(3),
        int(2),
        int(0),
        int(0),
    )
}

fn random_point(rng: &mut ChaCha8Rng) -> Mat2<f64> {
    let a = rng.gen_range(-2.0..2.0);
    exp_sl2(&Mat2::new(
        a,
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        -a,
    ))
}

/// Distance from every sampled curve point to every candidate, recomputed
/// with a brute-force lattice search rather than the refuter's metric.
fn brute_min_clearance(cert: &EvasionCertificate, samples: usize) -> f64 {
    let entries: Vec<BigInt> = cert
        .gamma
        .iter()
        .map(|s| parse_exact(s).unwrap().to_integer())
        .collect();
    let gamma = Mat2::from_flat(&entries);
    let mut best = f64::INFINITY;
    for k in 0..samples {
        let t = k as f64 / (samples - 1) as f64;
        let c = curve_point(&unipotent().g, &gamma, t).unwrap();
        for p in &cert.candidates.input {
            let rel = Mat2::new(p[0], p[1], p[2], p[3]).inverse().mul(&c);
            let r = canonical_rep(&rel).unwrap();
            let mut d = f64::INFINITY;
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    for cc in -3i64..=3 {
                        for dd in -3i64..=3 {
                            if a * dd - b * cc == 1 {
                                let m = Mat2::new(a as f64, b as f64, cc as f64, dd as f64);
                                d = d.min(r.mul(&m).dist_to_identity());
                            }
                        }
                    }
                }
            }
            best = best.min(d);
        }
    }
    best
}

#[test]
fn empty_candidate_uses_first_member_at_midpoint() {
    let target = unipotent();
    let cand = BlockingCandidate::for_sl2(vec![], 1e-3, &target.to_f64()).unwrap();
    let cert = refute_blocking(&target, &cand, &RefuteSettings::default()).unwrap();
    assert_eq!(cert.member.index, 1);
    assert_eq!(cert.gamma, ["4/1", "1/1", "-9/1", "-2/1"]);
    assert_eq!(cert.t.exact.as_deref(), Some("1/2"));
    assert!(replay_certificate(&cert).unwrap().passed);
}

#[test]
fn midpoint_candidate_forces_a_later_member() {
    let target = unipotent();
    let gamma = Mat2::new(4, 1, -9, -2).map(|&v| BigInt::from(v));
    let mid = curve_point(&target.g, &gamma, 0.5).unwrap();
    let cand = BlockingCandidate::for_sl2(vec![mid], 1e-3, &target.to_f64()).unwrap();
    let cert = refute_blocking(&target, &cand, &RefuteSettings::default()).unwrap();
    assert!(cert.member.index > 1);
    assert!(cert.min_clearance() > 1e-3);
    assert!(brute_min_clearance(&cert, 2000) > 1e-3);
}

#[test]
fn random_blocking_sets_are_refuted_and_replay() {
    let target = unipotent();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let pts: Vec<_> = (0..10).map(|_| random_point(&mut rng)).collect();
        let cand = BlockingCandidate::for_sl2(pts, 1e-3, &target.to_f64()).unwrap();
        let cert = refute_blocking(&target, &cand, &RefuteSettings::default()).unwrap();
        assert_eq!(cert.kind, CertificateKind::Sl2);
        let replayed = EvasionCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(replayed, cert);
        let report = replay_certificate(&replayed).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.clearance_drift <= 1e-12);
        assert!(brute_min_clearance(&cert, 500) > 1e-3);
    }
}

#[test]
fn tampered_certificates_fail_replay() {
    let target = unipotent();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pts: Vec<_> = (0..3).map(|_| random_point(&mut rng)).collect();
    let cand = BlockingCandidate::for_sl2(pts, 1e-3, &target.to_f64()).unwrap();
    let cert = refute_blocking(&target, &cand, &RefuteSettings::default()).unwrap();

    let mut wrong_gamma = cert.clone();
    wrong_gamma.gamma = vec!["6/1".into(), "1/1".into(), "-19/1".into(), "-3/1".into()];
    assert!(!replay_certificate(&wrong_gamma)
        .map(|r| r.passed)
        .unwrap_or(false));

    let mut wrong_clearance = cert.clone();
    wrong_clearance.clearances[0].min_clearance += 1e-6;
    assert!(!replay_certificate(&wrong_clearance).unwrap().passed);

    let mut wrong_trace = cert;
    wrong_trace.attestations.trace = "17".into();
    assert!(!replay_certificate(&wrong_trace).unwrap().passed);
}

#[test]
fn exhausted_budget_is_reported() {
    let target = unipotent();
    let gamma = Mat2::new(4, 1, -9, -2).map(|&v| BigInt::from(v));
    let pts: Vec<_> = [0.25, 0.5, 0.75]
        .iter()
        .map(|&t| curve_point(&target.g, &gamma, t).unwrap())
        .collect();
    let cand = BlockingCandidate::for_sl2(pts, 0.5, &target.to_f64()).unwrap();
    let err = refute_blocking(
        &target,
        &cand,
        &RefuteSettings {
            density: 200,
            budget: 1,
        },
    )
    .unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { .. }), "{err:?}");
}

#[test]
fn quaternionic_sets_are_refuted_and_replay() {
    let g = h23_target();
    let alg = g.alg;
    let metric = QuatMetric::new(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..3 {
        let pts: Vec<_> = (0..5)
            .map(|_| {
                exp_quat(&TangentVec::new(
                    alg,
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ))
            })
            .collect();
        let cand = quat_candidate(&pts, 1e-3, &metric, &g).unwrap();
        let cert = refute_blocking_quat(&g, &cand, &RefuteSettings::default()).unwrap();
        assert_eq!(cert.kind, CertificateKind::Quaternion);
        let report =
            replay_certificate(&EvasionCertificate::from_json(&cert.to_json()).unwrap()).unwrap();
        assert!(report.passed, "{report:?}");
        // candidate images are the φ-images of the input quaternions
        for (p, stored) in pts.iter().zip(&cert.candidates.input) {
            assert_eq!(&phi_f64(p).to_flat(), stored);
        }
    }
}

#[test]
fn quaternionic_midpoint_candidate_forces_a_later_member() {
    let g = h23_target();
    let metric = QuatMetric::new(g.alg);
    let gamma1 = find_gamma1(g.alg, GAMMA1_SEARCH_BOUND).unwrap();
    let mid = curve_point_quat(&g, &gamma1, 0.5).unwrap();
    let cand = quat_candidate(&[mid], 1e-3, &metric, &g).unwrap();
    let cert = refute_blocking_quat(&g, &cand, &RefuteSettings::default()).unwrap();
    assert!(cert.member.index > 1);
    assert!(replay_certificate(&cert).unwrap().passed);
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares against the stored file; `LATBLOCK_BLESS=1` rewrites it.
fn check_golden(name: &str, text: &str) {
    let path = golden(name);
    if std::env::var_os("LATBLOCK_BLESS").is_some() {
        std::fs::write(&path, text).unwrap();
    }
    let stored =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, stored, "{name} differs from the stored certificate");
    let parsed = EvasionCertificate::from_json(&stored).unwrap();
    assert_eq!(parsed.to_json(), stored);
    assert!(replay_certificate(&parsed).unwrap().passed);
}

#[test]
fn sl2_certificate_matches_golden_file() {
    let target = unipotent();
    let pts = vec![
        Mat2::new(1.5, 0.5, 1.0, 1.0),
        Mat2::new(1.0, 0.5, 0.0, 1.0),
        Mat2::new(0.5, 0.0, 0.25, 2.0),
    ];
    let cand = BlockingCandidate::for_sl2(pts, 1e-3, &target.to_f64()).unwrap();
    let cert = refute_blocking(
        &target,
        &cand,
        &RefuteSettings {
            density: 500,
            budget: 10,
        },
    )
    .unwrap();
    check_golden("sl2_certificate.json", &cert.to_json());
}

#[test]
fn quaternion_certificate_matches_golden_file() {
    let g = h23_target();
    let alg = g.alg;
    let metric = QuatMetric::new(alg);
    let pts = vec![
        Quaternion::new(alg, 1.5, 0.5, 0.5, 0.0),
        exp_quat(&TangentVec::new(alg, 0.25, -0.5, 0.125)),
    ];
    let cand = quat_candidate(&pts, 1e-3, &metric, &g).unwrap();
    let cert = refute_blocking_quat(
        &g,
        &cand,
        &RefuteSettings {
            density: 500,
            budget: 10,
        },
    )
    .unwrap();
    check_golden("quat_certificate.json", &cert.to_json());
}
