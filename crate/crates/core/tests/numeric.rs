mod common;

use common::{q, qi};
use latblock::numeric::rational::is_lowest_terms;
use latblock::numeric::{
    embed_real, quad_conj_norm, quad_mul, rat_arith, rational_nullspace, BigRational, QMatrix,
    QuadExt, RatOp,
};
use latblock::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn quad(p: BigRational, r: BigRational, d: i64) -> QuadExt {
    QuadExt::new(p, r, BigInt::from(d)).unwrap()
}

#[test]
fn rational_examples() {
    assert_eq!(rat_arith(&q(1, 2), &q(1, 3), RatOp::Add).unwrap(), q(5, 6));
    let half = q(2, 4);
    assert_eq!(
        (half.numer().clone(), half.denom().clone()),
        (BigInt::from(1), BigInt::from(2))
    );
    assert!(matches!(
        rat_arith(&q(1, 2), &qi(0), RatOp::Div),
        Err(Error::DivisionByZero)
    ));
}

#[test]
fn quadratic_examples() {
    let u = quad(qi(1), qi(1), 2);
    assert_eq!(quad_mul(&u, &u.conj()).unwrap(), quad(qi(-1), qi(0), 2));
    let r = quad(qi(0), qi(1), 2);
    assert_eq!(quad_mul(&r, &r).unwrap(), quad(qi(2), qi(0), 2));
    let unit = quad(qi(3), qi(2), 2);
    // (3 + 2√2)(3 - 2√2) = 9 - 8
    assert_eq!(
        quad_mul(&unit, &unit.conj()).unwrap(),
        quad(qi(1), qi(0), 2)
    );
    assert_eq!(quad_conj_norm(&unit), qi(1));
    assert_eq!(quad_conj_norm(&r), qi(-2));
    assert_eq!(quad_conj_norm(&quad(qi(1), qi(0), 5)), qi(1));
    assert!(quad_mul(&r, &quad(qi(0), qi(1), 3)).is_err());
    assert!(QuadExt::new(qi(1), qi(1), BigInt::from(4)).is_err());
}

#[test]
fn embedding_examples() {
    assert_eq!(embed_real(&q(1, 2)).value, 0.5);
    assert_eq!(embed_real(&qi(0)).value, 0.0);
    // 1 + √2 to 20 digits
    assert!((embed_real(&quad(qi(1), qi(1), 2)).value - 2.414_213_562_373_095).abs() < 1e-12);
    // cancellation: 99 - 70√2 = 1/(99 + 70√2)
    let small = embed_real(&quad(qi(99), qi(-70), 2)).value;
    assert!((small - 1.0 / (99.0 + 70.0 * 2f64.sqrt())).abs() < 1e-17);
}

#[test]
fn nullspace_examples() {
    assert!(rational_nullspace(&QMatrix::identity(4)).is_empty());
    let m = QMatrix::from_rows(vec![vec![qi(1), qi(1), qi(2)], vec![qi(3), qi(3), qi(5)]]);
    let kernel = rational_nullspace(&m);
    assert_eq!(kernel.len(), 1);
    let v = &kernel[0];
    assert!(
        v == &[BigInt::from(1), BigInt::from(-1), BigInt::from(0)]
            || v == &[BigInt::from(-1), BigInt::from(1), BigInt::from(0)]
    );
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn quad_of(d: i64) -> impl Strategy<Value = QuadExt> {
    (small_rational(), small_rational()).prop_map(move |(p, r)| quad(p, r, d))
}

/// Independent check that a column combination vanishes: `Σ vⱼ·colⱼ = 0`.
fn annihilates(m: &QMatrix, v: &[BigInt]) -> bool {
    (0..m.rows()).all(|i| {
        let mut acc = BigRational::zero();
        for (j, c) in v.iter().enumerate() {
            acc += &m[(i, j)] * BigRational::from_integer(c.clone());
        }
        acc.is_zero()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reciprocal_product_is_one(a in nonzero_rational(), b in nonzero_rational()) {
        let x = rat_arith(&a, &b, RatOp::Div).unwrap();
        let y = rat_arith(&b, &a, RatOp::Div).unwrap();
        let p = rat_arith(&x, &y, RatOp::Mul).unwrap();
        // cross-multiplication: (a/b)(b/a) = 1 iff numerator equals denominator
        prop_assert_eq!(p.numer() * BigInt::one(), p.denom() * BigInt::one());
        for r in [&x, &y, &p] {
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(r.numer().gcd(r.denom()).is_one());
            prop_assert!(is_lowest_terms(r));
        }
    }

    #[test]
    fn quadratic_ring_laws(u in quad_of(7), v in quad_of(7), w in quad_of(7)) {
        let uv = quad_mul(&u, &v).unwrap();
        prop_assert_eq!(&uv, &quad_mul(&v, &u).unwrap());
        prop_assert_eq!(quad_mul(&uv, &w).unwrap(), quad_mul(&u, &quad_mul(&v, &w).unwrap()).unwrap());
        prop_assert_eq!(quad_conj_norm(&uv), quad_conj_norm(&u) * quad_conj_norm(&v));
    }

    #[test]
    fn nullspace_vectors_are_primitive_kernel_elements(
        rows in 1usize..=8,
        cols in 1usize..=8,
        entries in proptest::collection::vec(-6i64..6, 64),
        rank_cut in 0usize..=8,
    ) {
        // repeat earlier rows beyond rank_cut to force nontrivial kernels
        let m = QMatrix::from_fn(rows, cols, |i, j| {
            let src = if i >= rank_cut.max(1) { i % rank_cut.max(1) } else { i };
            qi(entries[src * 8 + j])
        });
        let kernel = rational_nullspace(&m);
        for v in &kernel {
            prop_assert_eq!(v.len(), cols);
            prop_assert!(v.iter().any(|c| !c.is_zero()));
            prop_assert!(annihilates(&m, v));
            let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            prop_assert!(g.is_one());
        }
        // kernel dimension: cols minus the rank found by an independent float elimination
        prop_assert_eq!(kernel.len(), cols - float_rank(&m));
    }
}

#[allow(clippy::needless_range_loop)]
fn float_rank(m: &QMatrix) -> usize {
    let mut a: Vec<Vec<f64>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| latblock::numeric::rational::to_f64(&m[(i, j)]))
                .collect()
        })
        .collect();
    let (mut rank, cols) = (0, m.cols());
    for c in 0..cols {
        let Some(p) = (rank..a.len()).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
        else {
            break;
        };
        if a[p][c].abs() < 1e-9 {
            continue;
        }
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank {
                let f = a[r][c] / a[rank][c];
                for k in c..cols {
                    a[r][k] -= f * a[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}
