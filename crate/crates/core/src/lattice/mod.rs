//! The integer lattice `Γ = SL(2, Z)` acting on the right: membership,
//! reduction of rational cosets to lower-triangular form, a metric-minimal
//! representative for floating cosets, and the ℤ-linear algebra of coset
//! elements.

mod canonical;
mod dependence;
mod poly;
mod sample;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::rational::{ext_gcd, to_exact_string, BigRational};
use crate::sl2::Mat2;

pub use canonical::{
    canonical_rep, canonical_rep_with_gamma, coset_distance, coset_distance_capped,
    distance_to_identity_capped, gauss_reduce, MAX_CONDITION,
};
pub use dependence::{
    dependence_projects_to_times, five_dependence, flatten, integer_dependence, span_multiplier,
    CurvePointData, DependenceWitness, ProjectionReport, SpanMultiplier,
};
pub use poly::{subsequence_nonzero, BiPoly};
pub use sample::random_gamma;

/// How integrality is decided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "epsilon")]
pub enum MembershipMode {
    Exact,
    Tolerance(f64),
}

/// Rounds a float to an integer when it lies within `eps`.
fn near_integer(v: f64, eps: f64) -> Option<i128> {
    if !v.is_finite() || v.abs() > 9.0e15 {
        return None;
    }
    let r = v.round();
    ((v - r).abs() <= eps).then_some(r as i128)
}

pub fn is_in_gamma(m: &Mat2<f64>, mode: MembershipMode) -> bool {
    let eps = match mode {
        MembershipMode::Exact => 0.0,
        MembershipMode::Tolerance(e) => e,
    };
    let entries: Option<Vec<i128>> = m.entries().iter().map(|&&v| near_integer(v, eps)).collect();
    match entries.as_deref() {
        Some(&[x, y, z, w]) => x * w - y * z == 1,
        _ => false,
    }
}

pub fn is_in_gamma_exact(m: &Mat2<BigRational>) -> bool {
    m.is_integral() && m.det().is_one()
}

/// Whether `p⁻¹q ∈ Γ`.
pub fn same_coset(p: &Mat2<f64>, q: &Mat2<f64>, mode: MembershipMode) -> Result<bool> {
    let d = p.det();
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Singular);
    }
    Ok(is_in_gamma(&p.inverse().mul(q), mode))
}

pub fn same_coset_exact(p: &Mat2<BigRational>, q: &Mat2<BigRational>) -> Result<bool> {
    let d = p.det();
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let inv = p.adjugate().map(|v| v / &d);
    Ok(is_in_gamma_exact(&inv.mul(q)))
}

pub fn check_unimodular(g: &Mat2<BigRational>) -> Result<()> {
    let d = g.det();
    if d.is_one() {
        Ok(())
    } else {
        Err(Error::NotUnimodular {
            det: to_exact_string(&d),
        })
    }
}

/// A rational coset representative. When `normalized` it has the shape
/// `[[x, 0], [z, 1/x]]` with `x > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRep {
    pub g: Mat2<BigRational>,
    pub normalized: bool,
}

impl CosetRep {
    pub fn new(g: Mat2<BigRational>) -> Result<Self> {
        check_unimodular(&g)?;
        let normalized = g.y.is_zero() && g.x.is_positive();
        Ok(Self { g, normalized })
    }

    /// The normalized representative of `g Γ`.
    pub fn reduced(g: &Mat2<BigRational>) -> Result<Self> {
        Ok(coset_reduce(g)?.0)
    }

    pub fn x(&self) -> &BigRational {
        &self.g.x
    }

    pub fn z(&self) -> &BigRational {
        &self.g.z
    }

    pub fn to_f64(&self) -> Mat2<f64> {
        self.g.to_f64()
    }
}

/// Right-multiplies `g1` by `γ ∈ Γ` to clear the upper-right entry.
///
/// With `g1 = [[x, y], [·, ·]]`, the second column of `γ = [[p, q], [r, s]]`
/// is `(q, s)` with `s/q = -x/y` in lowest terms, `q > 0`. The first column
/// solves `ps - rq = 1`; among the solutions `(p + kq, r + ks)` the one with
/// least `|p|` is taken, ties toward `p >= 0`. Finally `-I` is absorbed so
/// that the diagonal is positive.
pub fn coset_reduce(g1: &Mat2<BigRational>) -> Result<(CosetRep, Mat2<BigInt>)> {
    check_unimodular(g1)?;
    let one = BigInt::one();
    let (p, q, r, s) = if g1.y.is_zero() {
        (one.clone(), BigInt::zero(), BigInt::zero(), one.clone())
    } else {
        let ratio = -(&g1.x / &g1.y);
        let (s, q) = (ratio.numer().clone(), ratio.denom().clone());
        let (_, u, v) = ext_gcd(&s, &q);
        let (p0, r0) = (u, -v);
        let lo = p0.mod_floor(&q);
        let hi = &lo - &q;
        let p = if hi.abs() < lo { hi } else { lo };
        let k = (&p - &p0) / &q;
        let r = r0 + &k * &s;
        (p, q, r, s)
    };
    let mut gamma = Mat2::new(p, q, r, s);
    let mut h = g1.mul(&gamma.map(|v| BigRational::from_integer(v.clone())));
    if h.x.is_negative() {
        h = h.neg();
        gamma = gamma.neg();
    }
    if !h.y.is_zero() || !gamma.det().is_one() {
        return Err(Error::Consistency(
            "coset reduction did not clear the upper-right entry".into(),
        ));
    }
    Ok((
        CosetRep {
            g: h,
            normalized: true,
        },
        gamma,
    ))
}
