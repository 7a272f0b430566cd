use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::quad::QuadExt;
use crate::numeric::rational::{from_bigint, to_f64, BigRational};
use crate::sl2::{a_of_lambda, even_part, modified_time, odd_part, Branch, Mat2, Scalar};

/// Parameters of `H^{a,b}`: `i² = a`, `j² = b`, `ij = k = -ji`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatAlgebra {
    pub a: i64,
    pub b: i64,
}

impl QuatAlgebra {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a <= 0 || b <= 0 {
            return Err(Error::Precondition(format!(
                "algebra parameters must be positive, got ({a}, {b})"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn sqrt_a(&self) -> f64 {
        (self.a as f64).sqrt()
    }
}

/// Scalars a quaternion can carry.
pub trait QuatScalar: Scalar + Zero + One {
    fn from_i64(v: i64) -> Self;
}

impl QuatScalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl QuatScalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl QuatScalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// `x + yi + zj + wk` in a fixed algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quaternion<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub w: T,
    pub alg: QuatAlgebra,
}

impl<T> Quaternion<T> {
    pub fn new(alg: QuatAlgebra, x: T, y: T, z: T, w: T) -> Self {
        Self { x, y, z, w, alg }
    }

    pub fn coords(&self) -> [&T; 4] {
        [&self.x, &self.y, &self.z, &self.w]
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Quaternion<U> {
        Quaternion {
            x: f(&self.x),
            y: f(&self.y),
            z: f(&self.z),
            w: f(&self.w),
            alg: self.alg,
        }
    }
}

impl<T: QuatScalar> Quaternion<T> {
    pub fn scalar(alg: QuatAlgebra, x: T) -> Self {
        Self::new(alg, x, T::zero(), T::zero(), T::zero())
    }

    pub fn one(alg: QuatAlgebra) -> Self {
        Self::scalar(alg, T::one())
    }

    pub fn i(alg: QuatAlgebra) -> Self {
        Self::new(alg, T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j(alg: QuatAlgebra) -> Self {
        Self::new(alg, T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k(alg: QuatAlgebra) -> Self {
        Self::new(alg, T::zero(), T::zero(), T::zero(), T::one())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.alg != o.alg {
            return Err(Error::AlgebraMismatch {
                a1: self.alg.a,
                b1: self.alg.b,
                a2: o.alg.a,
                b2: o.alg.b,
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self::new(
            self.alg,
            self.x.clone() + o.x.clone(),
            self.y.clone() + o.y.clone(),
            self.z.clone() + o.z.clone(),
            self.w.clone() + o.w.clone(),
        ))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.alg,
            self.x.clone(),
            -self.y.clone(),
            -self.z.clone(),
            -self.w.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let a = T::from_i64(self.alg.a);
        let b = T::from_i64(self.alg.b);
        let ab = a.clone() * b.clone();
        let (x1, y1, z1, w1) = (
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
            self.w.clone(),
        );
        let (x2, y2, z2, w2) = (o.x.clone(), o.y.clone(), o.z.clone(), o.w.clone());
        // i² = a, j² = b, k² = -ab, ij = k, jk = -bi, ki = -aj
        let x = x1.clone() * x2.clone()
            + a.clone() * y1.clone() * y2.clone()
            + b.clone() * z1.clone() * z2.clone()
            - ab * w1.clone() * w2.clone();
        let y = x1.clone() * y2.clone() + y1.clone() * x2.clone()
            - b.clone() * z1.clone() * w2.clone()
            + b * w1.clone() * z2.clone();
        let z =
            x1.clone() * z2.clone() + z1.clone() * x2.clone() + a.clone() * y1.clone() * w2.clone()
                - a * w1.clone() * y2.clone();
        let w = x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2;
        Ok(Self::new(self.alg, x, y, z, w))
    }

    /// `x² - ay² - bz² + abw² = g·conj(g)`.
    pub fn nred(&self) -> T {
        let a = T::from_i64(self.alg.a);
        let b = T::from_i64(self.alg.b);
        self.x.clone() * self.x.clone()
            - a.clone() * self.y.clone() * self.y.clone()
            - b.clone() * self.z.clone() * self.z.clone()
            + a * b * self.w.clone() * self.w.clone()
    }

    pub fn is_pure(&self) -> bool {
        self.x.is_zero()
    }
}

impl Quaternion<BigInt> {
    pub fn to_rational(&self) -> Quaternion<BigRational> {
        self.map(from_bigint)
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        self.map(|v| to_f64(&from_bigint(v)))
    }
}

impl Quaternion<BigRational> {
    pub fn to_f64(&self) -> Quaternion<f64> {
        self.map(to_f64)
    }

    pub fn to_integer(&self) -> Option<Quaternion<BigInt>> {
        if self.coords().iter().all(|v| v.is_integer()) {
            Some(self.map(|v| v.to_integer()))
        } else {
            None
        }
    }
}

impl Quaternion<f64> {
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.coords()
            .iter()
            .zip(o.coords())
            .map(|(p, q)| (*p - q).abs())
            .fold(0.0, f64::max)
    }
}

impl<T: fmt::Display> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})i + ({})j + ({})k",
            self.x, self.y, self.z, self.w
        )
    }
}

/// `φ(g) = [[x + y√a, z + w√a], [b(z - w√a), x - y√a]]` over `Q(√a)`.
pub fn phi_iso(g: &Quaternion<BigRational>) -> Result<Mat2<QuadExt>> {
    let d = BigInt::from(g.alg.a);
    let b = BigRational::from_integer(BigInt::from(g.alg.b));
    let q = |r: &BigRational, s: &BigRational| QuadExt::new(r.clone(), s.clone(), d.clone());
    Ok(Mat2::new(
        q(&g.x, &g.y)?,
        q(&g.z, &g.w)?,
        q(&(&b * &g.z), &-(&b * &g.w))?,
        q(&g.x, &-g.y.clone())?,
    ))
}

/// Floating image of `φ`, valid for any `a > 0`.
pub fn phi_f64(g: &Quaternion<f64>) -> Mat2<f64> {
    let s = g.alg.sqrt_a();
    let b = g.alg.b as f64;
    Mat2::new(
        g.x + g.y * s,
        g.z + g.w * s,
        b * (g.z - g.w * s),
        g.x - g.y * s,
    )
}

/// Inverse of [`phi_f64`] on its image.
pub fn phi_inverse_f64(m: &Mat2<f64>, alg: QuatAlgebra) -> Quaternion<f64> {
    let s = alg.sqrt_a();
    let b = alg.b as f64;
    let lower = m.z / b;
    Quaternion::new(
        alg,
        0.5 * (m.x + m.w),
        0.5 * (m.x - m.w) / s,
        0.5 * (m.y + lower),
        0.5 * (m.y - lower) / s,
    )
}

/// A tangent vector `u₁i + u₂j + u₃k` at the identity of `SL(1, H)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVec {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    /// `√|u₁²a + u₂²b - u₃²ab|`.
    pub omega: f64,
    pub branch: Branch,
    pub alg: QuatAlgebra,
}

impl TangentVec {
    pub fn new(alg: QuatAlgebra, u1: f64, u2: f64, u3: f64) -> Self {
        let delta = tangent_square(alg, u1, u2, u3);
        let branch = if delta > 0.0 {
            Branch::Hyperbolic
        } else if delta < 0.0 {
            Branch::Elliptic
        } else {
            Branch::Parabolic
        };
        Self {
            u1,
            u2,
            u3,
            omega: delta.abs().sqrt(),
            branch,
            alg,
        }
    }

    /// `U² = u₁²a + u₂²b - u₃²ab`, a real scalar.
    pub fn square(&self) -> f64 {
        tangent_square(self.alg, self.u1, self.u2, self.u3)
    }

    pub fn scale(&self, t: f64) -> Self {
        Self::new(self.alg, t * self.u1, t * self.u2, t * self.u3)
    }
}

fn tangent_square(alg: QuatAlgebra, u1: f64, u2: f64, u3: f64) -> f64 {
    let (a, b) = (alg.a as f64, alg.b as f64);
    u1 * u1 * a + u2 * u2 * b - u3 * u3 * a * b
}

/// `dφ₁(U) = [[u₁√a, u₂ + u₃√a], [bu₂ - b√a·u₃, -u₁√a]]`.
pub fn dphi1(u: &TangentVec) -> Mat2<f64> {
    let s = u.alg.sqrt_a();
    let b = u.alg.b as f64;
    Mat2::new(
        u.u1 * s,
        u.u2 + u.u3 * s,
        b * u.u2 - b * s * u.u3,
        -u.u1 * s,
    )
}

/// `exp(U) = C + S·U` with `C = cosh ω`, `S = sinh ω / ω` (trigonometric
/// when `U² < 0`, `1 + U` when `U² = 0`).
pub fn exp_quat(u: &TangentVec) -> Quaternion<f64> {
    let delta = u.square();
    let (c, s) = (even_part(delta), odd_part(delta));
    Quaternion::new(u.alg, c, s * u.u1, s * u.u2, s * u.u3)
}

/// The unique logarithm of a norm-one `g` with `x > 1`, or `x = 1`.
pub fn log_quat(g: &Quaternion<f64>) -> Result<TangentVec> {
    if g.x < 1.0 {
        return Err(Error::UnsupportedBranch {
            trace: 2.0 * g.x,
            case: "quaternion logarithm needs Re g >= 1",
        });
    }
    let omega = g.x.acosh();
    let coef = 1.0 / odd_part(omega * omega);
    Ok(TangentVec::new(g.alg, coef * g.y, coef * g.z, coef * g.w))
}

/// `g^t = (cosh tω - λ cosh ω)·1 + λ·g` with `λ = sinh tω / sinh ω` and
/// `cosh ω = x`.
pub fn power_t_quat(g: &Quaternion<f64>, t: f64) -> Result<Quaternion<f64>> {
    if !(g.x > 1.0) {
        return Err(Error::UnsupportedBranch {
            trace: 2.0 * g.x,
            case: "power_t_quat needs Re g > 1",
        });
    }
    let omega = g.x.acosh();
    let lambda = modified_time(t, omega);
    Ok(Quaternion::new(
        g.alg,
        (t * omega).cosh(),
        lambda * g.y,
        lambda * g.z,
        lambda * g.w,
    ))
}

/// `(gγ)^t = [a(λ) - xλ]·1 + λ·gγ` with `x = Re(gγ)` and
/// `a(λ) = (1 + (x² - 1)λ²)^{1/2}`.
pub fn curve_point_quat(
    g: &Quaternion<BigRational>,
    gamma: &Quaternion<BigInt>,
    t: f64,
) -> Result<Quaternion<f64>> {
    let product = g.mul(&gamma.to_rational())?;
    let x = to_f64(&product.x);
    if !(product.x > BigRational::one()) {
        return Err(Error::UnsupportedBranch {
            trace: 2.0 * x,
            case: "curve needs Re(gγ) > 1",
        });
    }
    Ok(curve_point_from_quat(&product.to_f64(), t))
}

/// As [`curve_point_quat`] from a precomputed `gγ`.
pub fn curve_point_from_quat(product: &Quaternion<f64>, t: f64) -> Quaternion<f64> {
    let x = product.x;
    let lambda = modified_time(t, x.acosh());
    let a = a_of_lambda(lambda, 2.0 * x);
    Quaternion::new(
        product.alg,
        a,
        lambda * product.y,
        lambda * product.z,
        lambda * product.w,
    )
}
