use latblock::numeric::BigRational;
use latblock::parse::{
    format_blocking_file, format_matrix, format_quaternion, parse_blocking_file, parse_matrix,
    parse_quaternion, BlockingPoint,
};
use latblock::quat::{exp_quat, QuatAlgebra, Quaternion, TangentVec};
use latblock::sl2::{exp_sl2, Mat2};
use latblock::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..500)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

#[test]
fn error_positions_point_at_the_offending_entry() {
    let err = parse_matrix("1,2;3,x7").unwrap_err();
    assert!(matches!(err, Error::Parse { position: 6, .. }), "{err:?}");
    let alg = QuatAlgebra::new(2, 3).unwrap();
    let err = parse_blocking_file("# c\n1,0;0,1\n3+2q\n", Some(alg)).unwrap_err();
    assert!(matches!(err, Error::Parse { .. }), "{err:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn matrices_round_trip(e in proptest::array::uniform4(rational())) {
        let m = Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone());
        prop_assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn quaternions_round_trip(e in proptest::array::uniform4(rational())) {
        let alg = QuatAlgebra::new(5, 7).unwrap();
        let g = Quaternion::new(alg, e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone());
        prop_assert_eq!(parse_quaternion(&format_quaternion(&g), alg).unwrap(), g);
    }

    #[test]
    fn blocking_files_round_trip(
        mats in proptest::collection::vec(proptest::array::uniform3(-2.0f64..2.0), 0..8),
        quats in proptest::collection::vec(proptest::array::uniform3(-1.0f64..1.0), 0..8),
    ) {
        let alg = QuatAlgebra::new(2, 3).unwrap();
        let mut points: Vec<BlockingPoint> = mats
            .iter()
            .map(|u| BlockingPoint::Matrix(exp_sl2(&Mat2::new(u[0], u[1], u[2], -u[0]))))
            .collect();
        points.extend(quats.iter().map(|u| BlockingPoint::Quaternion(exp_quat(&TangentVec::new(alg, u[0], u[1], u[2])))));
        let text = format!("# generated\n\n{}", format_blocking_file(&points));
        let back = parse_blocking_file(&text, Some(alg)).unwrap();
        prop_assert_eq!(back.points.len(), points.len());
        for ((line, p), q) in back.points.iter().zip(&points) {
            prop_assert!(*line >= 3);
            // rescaling onto the group moves points by at most a few ulps
            match (p, q) {
                (BlockingPoint::Matrix(a), BlockingPoint::Matrix(b)) => prop_assert!(a.max_abs_diff(b) < 1e-12 * (1.0 + b.frobenius())),
                (BlockingPoint::Quaternion(a), BlockingPoint::Quaternion(b)) => prop_assert!(a.max_abs_diff(b) < 1e-12 * (1.0 + b.x.abs())),
                _ => prop_assert!(false, "kind changed"),
            }
        }
    }
}
