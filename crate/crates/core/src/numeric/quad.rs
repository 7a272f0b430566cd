//! Elements `p + q*sqrt(d)` of a real quadratic field `Q(sqrt(d))`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::approx::ApproxReal;
use super::rational::{from_bigint, is_perfect_square, to_f64, BigRational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    rational: BigRational,
    radical: BigRational,
    radicand: BigInt,
}

impl QuadExt {
    pub fn new(rational: BigRational, radical: BigRational, radicand: BigInt) -> Result<Self> {
        if !radicand.is_positive() || is_perfect_square(&radicand) {
            return Err(Error::InvalidRadicand(radicand));
        }
        Ok(Self {
            rational,
            radical,
            radicand,
        })
    }

    pub fn from_rational(value: BigRational, radicand: BigInt) -> Result<Self> {
        Self::new(value, BigRational::zero(), radicand)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(radicand: BigInt) -> Result<Self> {
        Self::new(
            BigRational::zero(),
            BigRational::from_integer(1.into()),
            radicand,
        )
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.radical
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radical.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.radicand != other.radicand {
            return Err(Error::RadicandMismatch {
                left: self.radicand.clone(),
                right: other.radicand.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            rational: &self.rational + &other.rational,
            radical: &self.radical + &other.radical,
            radicand: self.radicand.clone(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            rational: &self.rational - &other.rational,
            radical: &self.radical - &other.radical,
            radicand: self.radicand.clone(),
        })
    }

    /// `(p + q√d)(r + s√d) = (pr + qsd) + (ps + qr)√d`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = from_bigint(&self.radicand);
        Ok(Self {
            rational: &self.rational * &other.rational + &self.radical * &other.radical * d,
            radical: &self.rational * &other.radical + &self.radical * &other.rational,
            radicand: self.radicand.clone(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            rational: &self.rational * k,
            radical: &self.radical * k,
            radicand: self.radicand.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            rational: self.rational.clone(),
            radical: -&self.radical,
            radicand: self.radicand.clone(),
        }
    }

    /// Galois norm `p^2 - d q^2`.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - &self.radical * &self.radical * from_bigint(&self.radicand)
    }

    /// Double-precision image, accurate to a few ulps even under cancellation:
    /// when `p` and `q√d` have opposite signs the value is evaluated as
    /// `N / (p - q√d)` with the exact norm `N`.
    pub fn embed(&self) -> ApproxReal {
        ApproxReal::new(self.to_f64())
    }

    pub fn to_f64(&self) -> f64 {
        let p = to_f64(&self.rational);
        let root = to_f64(&from_bigint(&self.radicand)).sqrt();
        let qr = to_f64(&self.radical) * root;
        if self.radical.is_zero() || self.rational.is_zero() || (p > 0.0) == (qr > 0.0) {
            p + qr
        } else {
            to_f64(&self.norm()) / (p - qr)
        }
    }
}

pub fn quad_mul(u: &QuadExt, v: &QuadExt) -> Result<QuadExt> {
    u.try_mul(v)
}

pub fn quad_conj_norm(u: &QuadExt) -> BigRational {
    u.norm()
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}·√{})",
            self.rational, self.radical, self.radicand
        )
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// Operator forms panic on radicand mismatch, the way shape mismatches panic in
// array libraries; the `try_*` methods are the checked surface.
impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("QuadExt addition")
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("QuadExt subtraction")
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("QuadExt multiplication")
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> Self {
        Self {
            rational: -self.rational,
            radical: -self.radical,
            radicand: self.radicand,
        }
    }
}
