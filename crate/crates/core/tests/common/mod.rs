#![allow(dead_code)]

use latblock::numeric::{BigRational, QMatrix};
use latblock::sl2::Mat2;
use num_bigint::BigInt;
use num_traits::Zero;

/// `exp(X)` by scaling and squaring around a degree-30 Taylor polynomial.
pub fn series_exp(x: &Mat2<f64>) -> Mat2<f64> {
    let norm = x.frobenius();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let y = x.scale(&scale);
    let mut term = Mat2::identity();
    let mut sum = Mat2::identity();
    for k in 1..=30 {
        term = term.mul(&y).scale(&(1.0 / k as f64));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Determinant by the Leibniz expansion over all permutations.
pub fn leibniz_det(m: &QMatrix) -> BigRational {
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigRational::zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, m: &QMatrix, total: &mut BigRational) {
    let n = perm.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut term =
            BigRational::from_integer(BigInt::from(if inversions % 2 == 0 { 1 } else { -1 }));
        for (r, &c) in perm.iter().enumerate() {
            term *= &m[(r, c)];
        }
        *total += term;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
