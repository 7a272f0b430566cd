use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::rational::{from_bigint, to_f64, BigRational};

/// Ring operations needed by 2×2 and dense matrix arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Row-major 2×2 matrix `[[x, y], [z, w]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub w: T,
}

impl<T> Mat2<T> {
    pub const fn new(x: T, y: T, z: T, w: T) -> Self {
        Self { x, y, z, w }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Mat2<U> {
        Mat2 {
            x: f(&self.x),
            y: f(&self.y),
            z: f(&self.z),
            w: f(&self.w),
        }
    }

    /// Entries in row-major order, the `[γ]` flattening into a 4-vector.
    pub fn entries(&self) -> [&T; 4] {
        [&self.x, &self.y, &self.z, &self.w]
    }

    pub fn rows(&self) -> [[&T; 2]; 2] {
        [[&self.x, &self.y], [&self.z, &self.w]]
    }
}

impl<T: Clone> Mat2<T> {
    pub fn from_flat(v: &[T]) -> Self {
        assert_eq!(v.len(), 4, "expected four entries");
        Self::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
    }

    pub fn to_flat(&self) -> [T; 4] {
        [
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
            self.w.clone(),
        ]
    }
}

impl<T: Scalar> Mat2<T> {
    pub fn det(&self) -> T {
        self.x.clone() * self.w.clone() - self.y.clone() * self.z.clone()
    }

    pub fn trace(&self) -> T {
        self.x.clone() + self.w.clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.x.clone() * o.x.clone() + self.y.clone() * o.z.clone(),
            self.x.clone() * o.y.clone() + self.y.clone() * o.w.clone(),
            self.z.clone() * o.x.clone() + self.w.clone() * o.z.clone(),
            self.z.clone() * o.y.clone() + self.w.clone() * o.w.clone(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.x.clone() + o.x.clone(),
            self.y.clone() + o.y.clone(),
            self.z.clone() + o.z.clone(),
            self.w.clone() + o.w.clone(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            self.x.clone() - o.x.clone(),
            self.y.clone() - o.y.clone(),
            self.z.clone() - o.z.clone(),
            self.w.clone() - o.w.clone(),
        )
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|v| k.clone() * v.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    /// `[[w, -y], [-z, x]]`; the inverse when `det = 1`.
    pub fn adjugate(&self) -> Self {
        Self::new(
            self.w.clone(),
            -self.y.clone(),
            -self.z.clone(),
            self.x.clone(),
        )
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.x.clone(),
            self.z.clone(),
            self.y.clone(),
            self.w.clone(),
        )
    }
}

impl<T: Scalar + Zero + One> Mat2<T> {
    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn diag(a: T, d: T) -> Self {
        Self::new(a, T::zero(), T::zero(), d)
    }
}

impl<T: Scalar> Mul for &Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Self) -> Mat2<T> {
        Mat2::mul(self, rhs)
    }
}

impl Mat2<f64> {
    pub fn from_rows(r: [[f64; 2]; 2]) -> Self {
        Self::new(r[0][0], r[0][1], r[1][0], r[1][1])
    }

    pub fn to_rows(&self) -> [[f64; 2]; 2] {
        [[self.x, self.y], [self.z, self.w]]
    }

    pub fn frobenius(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w).sqrt()
    }

    pub fn dist(&self, o: &Self) -> f64 {
        self.sub(o).frobenius()
    }

    /// Frobenius distance to the identity.
    pub fn dist_to_identity(&self) -> f64 {
        let (a, d) = (self.x - 1.0, self.w - 1.0);
        (a * a + self.y * self.y + self.z * self.z + d * d).sqrt()
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        [self.x - o.x, self.y - o.y, self.z - o.z, self.w - o.w]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        self.adjugate().map(|v| v / d)
    }

    /// Product with an integer matrix using fused multiply-adds, so each
    /// entry carries a single rounding.
    pub fn mul_int(&self, g: &Mat2<i64>) -> Self {
        let (a, b, c, d) = (g.x as f64, g.y as f64, g.z as f64, g.w as f64);
        Self::new(
            dot2(self.x, a, self.y, c),
            dot2(self.x, b, self.y, d),
            dot2(self.z, a, self.w, c),
            dot2(self.z, b, self.w, d),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }
}

/// `a*b + c*d` with Kahan's fma compensation.
pub fn dot2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let cd = c * d;
    let err = c.mul_add(d, -cd);
    a.mul_add(b, cd) + err
}

impl Mat2<BigRational> {
    pub fn to_f64(&self) -> Mat2<f64> {
        self.map(to_f64)
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|v| v.is_integer())
    }

    pub fn to_integer(&self) -> Option<Mat2<BigInt>> {
        self.is_integral().then(|| self.map(|v| v.to_integer()))
    }

    pub fn from_int(m: &Mat2<BigInt>) -> Self {
        m.map(from_bigint)
    }
}

impl Mat2<BigInt> {
    pub fn to_rational(&self) -> Mat2<BigRational> {
        self.map(from_bigint)
    }

    pub fn to_i64(&self) -> Option<Mat2<i64>> {
        use num_traits::ToPrimitive;
        Some(Mat2::new(
            self.x.to_i64()?,
            self.y.to_i64()?,
            self.z.to_i64()?,
            self.w.to_i64()?,
        ))
    }
}

impl Mat2<i64> {
    pub fn to_bigint(&self) -> Mat2<BigInt> {
        self.map(|&v| BigInt::from(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    #[test]
    fn exact_product_and_determinant() {
        let g = Mat2::new(int(1), int(2), int(1), int(3));
        let h = Mat2::new(rat(1, 2), int(0), int(5), int(2));
        assert_eq!(g.det(), int(1));
        assert_eq!(g.mul(&h).det(), g.det() * h.det());
        assert_eq!(g.mul(&g.adjugate()), Mat2::identity());
    }

    #[test]
    fn fused_integer_product_matches_plain_product() {
        let g = Mat2::new(0.3, -1.7, 2.25, 0.5);
        let gamma = Mat2::new(3i64, 2, 4, 3);
        let plain = g.mul(&gamma.map(|&v| v as f64));
        assert!(g.mul_int(&gamma).max_abs_diff(&plain) < 1e-14);
    }
}
