//! Evasion families in `SL(1, H^{a,b}_Z)` for `g = x + yi`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linalg::{determinant, QMatrix};
use crate::numeric::rational::{from_bigint, BigRational};

use super::algebra::{QuatAlgebra, Quaternion};
use super::arith::{pell_family, PellSolution};

/// Default coordinate bound when searching for `γ₁`.
pub const GAMMA1_SEARCH_BOUND: i64 = 6;

const FAMILY_SLACK: usize = 8;

/// Largest family accepted by [`gen_family_quat`].
pub const MAX_QUAT_FAMILY: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatMember {
    /// Position in the family, starting at 1.
    pub index: usize,
    pub gamma: Quaternion<BigInt>,
    /// `gγ`, exact.
    pub product: Quaternion<BigRational>,
}

impl QuatMember {
    /// `Re(gγ)`.
    pub fn re(&self) -> &BigRational {
        &self.product.x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatFamily {
    pub g: Quaternion<BigRational>,
    pub gamma1: Quaternion<BigInt>,
    /// `n = p₁² - aq₁²`, the value of the Pell equation driving the family.
    pub pell_n: BigInt,
    /// `xr₁ + ays₁` and `xs₁ + yr₁`, shared by every member.
    pub z: BigRational,
    pub w: BigRational,
    pub members: Vec<QuatMember>,
}

impl QuatFamily {
    pub fn alg(&self) -> QuatAlgebra {
        self.g.alg
    }

    pub fn member(&self, index: usize) -> Result<&QuatMember> {
        index
            .checked_sub(1)
            .and_then(|i| self.members.get(i))
            .ok_or(Error::IndexOutOfRange {
                index,
                what: "quaternionic family (1-based)",
            })
    }
}

/// Checks that `g = x + yi` has rational coordinates and reduced norm 1.
pub fn check_family_base(g: &Quaternion<BigRational>) -> Result<()> {
    if !g.z.is_zero() || !g.w.is_zero() {
        return Err(Error::Precondition(
            "the base point must have the form x + yi".into(),
        ));
    }
    if !g.nred().is_one() {
        return Err(Error::Precondition(format!(
            "nred(g) = {} is not 1",
            g.nred()
        )));
    }
    if crate::numeric::rational::is_perfect_square(&BigInt::from(g.alg.a)) {
        return Err(Error::PerfectSquare(BigInt::from(g.alg.a)));
    }
    Ok(())
}

/// Ordering of a coordinate range: `0, 1, -1, 2, -2, …`.
fn signed_range(bound: i64) -> impl Iterator<Item = i64> + Clone {
    std::iter::once(0).chain((1..=bound).flat_map(|v| [v, -v]))
}

/// The first norm-one lattice element `p + qi + rj + sk` with `(r, s) ≠ (0, 0)`
/// and `(p, q) ≠ (0, 0)`, scanning shells of growing `max |coordinate|`
/// and each coordinate in the order `0, 1, -1, 2, …`.
pub fn find_gamma1(alg: QuatAlgebra, bound: i64) -> Result<Quaternion<BigInt>> {
    for shell in 1..=bound {
        for p in signed_range(shell) {
            for q in signed_range(shell) {
                for r in signed_range(shell) {
                    for s in signed_range(shell) {
                        if [p, q, r, s].iter().map(|v| v.abs()).max() != Some(shell) {
                            continue;
                        }
                        if (r, s) == (0, 0) || (p, q) == (0, 0) {
                            continue;
                        }
                        let g: Quaternion<BigInt> =
                            Quaternion::new(alg, p.into(), q.into(), r.into(), s.into());
                        if g.nred().is_one() {
                            return Ok(g);
                        }
                    }
                }
            }
        }
    }
    Err(Error::NoFamilySeed { bound })
}

/// Flips the signs of `(p, q)` so that `xp >= 0` and `yq >= 0`.
fn align_signs(p: &BigInt, q: &BigInt, g: &Quaternion<BigRational>) -> (BigInt, BigInt) {
    let p = if g.x.is_negative() { -p.abs() } else { p.abs() };
    let q = if g.y.is_negative() { -q.abs() } else { q.abs() };
    (p, q)
}

/// Family `γᵢ = pᵢ + qᵢi + r₁j + s₁k` where `(pᵢ, qᵢ)` runs through `(p₁, q₁)`
/// and its Pell orbit for `p² - aq² = p₁² - aq₁²`, signs aligned with `g`.
/// Members with `Re(gγ) <= 1` are skipped, so every curve is hyperbolic.
pub fn gen_family_quat(
    g: &Quaternion<BigRational>,
    gamma1: &Quaternion<BigInt>,
    count: usize,
) -> Result<QuatFamily> {
    check_family_base(g)?;
    if count > MAX_QUAT_FAMILY {
        return Err(Error::Precondition(format!(
            "family size {count} exceeds {MAX_QUAT_FAMILY}"
        )));
    }
    if gamma1.alg != g.alg {
        return Err(Error::AlgebraMismatch {
            a1: g.alg.a,
            b1: g.alg.b,
            a2: gamma1.alg.a,
            b2: gamma1.alg.b,
        });
    }
    if !gamma1.nred().is_one() {
        return Err(Error::Precondition("γ₁ must have reduced norm 1".into()));
    }
    let (r1, s1) = (gamma1.z.clone(), gamma1.w.clone());
    if r1.is_zero() && s1.is_zero() {
        return Err(Error::Precondition("γ₁ needs (r, s) ≠ (0, 0)".into()));
    }
    let alg = g.alg;
    let d = u64::try_from(alg.a).map_err(|_| Error::Precondition("a must be positive".into()))?;
    let seed = PellSolution::new(gamma1.x.clone(), gamma1.y.clone(), d);
    // the orbit grows geometrically, so only a few leading terms can have Re(gγ) <= 1
    let orbit = pell_family(&seed, count + FAMILY_SLACK)?;
    let one = BigRational::one();
    let mut members: Vec<QuatMember> = Vec::with_capacity(count);
    for (p, q) in std::iter::once((seed.p.clone(), seed.q.clone()))
        .chain(orbit.into_iter().map(|s| (s.p, s.q)))
    {
        if members.len() == count {
            break;
        }
        let (p, q) = align_signs(&p, &q, g);
        let gamma = Quaternion::new(alg, p, q, r1.clone(), s1.clone());
        let product = g.mul(&gamma.to_rational())?;
        if product.x > one {
            members.push(QuatMember {
                index: members.len() + 1,
                gamma,
                product,
            });
        }
    }
    if members.len() < count {
        return Err(Error::SequenceExhausted {
            found: members.len(),
            wanted: count,
        });
    }
    let (z, w) = fixed_components(g, &r1, &s1);
    let family = QuatFamily {
        g: g.clone(),
        gamma1: gamma1.clone(),
        pell_n: seed.n,
        z,
        w,
        members,
    };
    verify_family(&family)?;
    Ok(family)
}

/// `(xr₁ + ays₁, xs₁ + yr₁)`.
pub fn fixed_components(
    g: &Quaternion<BigRational>,
    r1: &BigInt,
    s1: &BigInt,
) -> (BigRational, BigRational) {
    let a = from_bigint(&BigInt::from(g.alg.a));
    let (r, s) = (from_bigint(r1), from_bigint(s1));
    (&g.x * &r + &a * &g.y * &s, &g.x * &s + &g.y * &r)
}

/// Exact re-check of the family invariants.
pub fn verify_family(f: &QuatFamily) -> Result<()> {
    let a = from_bigint(&BigInt::from(f.alg().a));
    let (r1, s1) = (from_bigint(&f.gamma1.z), from_bigint(&f.gamma1.w));
    let expected = (&f.g.x * &f.g.x - &a * &f.g.y * &f.g.y) * (&r1 * &r1 - &a * &s1 * &s1);
    let zw = &f.z * &f.z - &a * &f.w * &f.w;
    if zw != expected || zw.is_zero() {
        return Err(Error::Consistency(
            "z² - aw² does not match (x² - ay²)(r₁² - as₁²) ≠ 0".into(),
        ));
    }
    for m in &f.members {
        if !m.gamma.nred().is_one() {
            return Err(Error::Consistency(format!(
                "nred γ ≠ 1 for member {}",
                m.index
            )));
        }
        if m.product != f.g.mul(&m.gamma.to_rational())? || m.product.z != f.z || m.product.w != f.w
        {
            return Err(Error::Consistency(format!(
                "z, w not fixed for member {}",
                m.index
            )));
        }
    }
    for pair in f.members.windows(2) {
        if pair[1].re() <= pair[0].re() {
            return Err(Error::Consistency("Re(gγᵢ) must increase strictly".into()));
        }
    }
    Ok(())
}

/// `B(i, j)` for `eᵢ = gγᵢ`, `eⱼ = gγⱼ`; it sends
/// `(a(λᵢ)a(λⱼ), λᵢa(λⱼ), a(λᵢ)λⱼ, λᵢλⱼ)` to the coordinates of
/// `[(gγᵢ)^{tᵢ}]⁻¹ (gγⱼ)^{tⱼ}`.
pub fn build_b_quat(ei: &Quaternion<BigRational>, ej: &Quaternion<BigRational>) -> QMatrix {
    let a = from_bigint(&BigInt::from(ei.alg.a));
    let b = from_bigint(&BigInt::from(ei.alg.b));
    let (yi, zi, wi) = (&ei.y, &ei.z, &ei.w);
    let (yj, zj, wj) = (&ej.y, &ej.z, &ej.w);
    let zero = BigRational::zero();
    QMatrix::from_rows(vec![
        vec![
            BigRational::one(),
            zero.clone(),
            zero.clone(),
            wi * wj * &a * &b - yi * yj * &a - zi * zj * &b,
        ],
        vec![
            zero.clone(),
            -yi.clone(),
            yj.clone(),
            (zi * wj - wi * zj) * &b,
        ],
        vec![
            zero.clone(),
            -zi.clone(),
            zj.clone(),
            (wi * yj - yi * wj) * &a,
        ],
        vec![zero, -wi.clone(), wj.clone(), zi * yj - yi * zj],
    ])
}

/// `-(wᵢyⱼ - yᵢwⱼ)²a - (wᵢzⱼ - zᵢwⱼ)²b + (zᵢyⱼ - yᵢzⱼ)²`.
pub fn det_b_quat(ei: &Quaternion<BigRational>, ej: &Quaternion<BigRational>) -> BigRational {
    let a = from_bigint(&BigInt::from(ei.alg.a));
    let b = from_bigint(&BigInt::from(ei.alg.b));
    let u = &ei.w * &ej.y - &ei.y * &ej.w;
    let v = &ei.w * &ej.z - &ei.z * &ej.w;
    let c = &ei.z * &ej.y - &ei.y * &ej.z;
    -(&u * &u * a) - &v * &v * b + &c * &c
}

/// Exact determinant of [`build_b_quat`].
pub fn det_b_quat_direct(
    ei: &Quaternion<BigRational>,
    ej: &Quaternion<BigRational>,
) -> BigRational {
    determinant(&build_b_quat(ei, ej))
}

/// Coefficient of `yⱼ²` in [`det_b_quat`], namely `zᵢ² - awᵢ²`.
pub fn det_b_quat_leading(ei: &Quaternion<BigRational>) -> BigRational {
    let a = from_bigint(&BigInt::from(ei.alg.a));
    &ei.z * &ei.z - a * &ei.w * &ei.w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::int;

    fn h23() -> QuatAlgebra {
        QuatAlgebra::new(2, 3).unwrap()
    }

    fn base() -> Quaternion<BigRational> {
        Quaternion::new(h23(), int(3), int(2), int(0), int(0))
    }

    #[test]
    fn gamma1_for_h23() {
        let g1 = find_gamma1(h23(), GAMMA1_SEARCH_BOUND).unwrap();
        assert_eq!(
            g1,
            Quaternion::new(h23(), 0.into(), 1.into(), 1.into(), 1.into())
        );
        let (r, s) = (&g1.z, &g1.w);
        assert_eq!(r * r - BigInt::from(2) * s * s, BigInt::from(-1));
    }

    #[test]
    fn family_from_three_plus_two_i() {
        let g1 = find_gamma1(h23(), GAMMA1_SEARCH_BOUND).unwrap();
        let f = gen_family_quat(&base(), &g1, 4).unwrap();
        assert_eq!(f.pell_n, BigInt::from(-2));
        assert_eq!((f.z.clone(), f.w.clone()), (int(7), int(5)));
        let ps: Vec<BigInt> = f.members.iter().map(|m| m.gamma.x.clone()).collect();
        assert_eq!(ps, [0, 4, 24, 140].map(BigInt::from));
        for m in &f.members {
            assert_eq!(det_b_quat_leading(&m.product), int(-1));
        }
    }

    #[test]
    fn determinant_closed_form() {
        let g1 = find_gamma1(h23(), GAMMA1_SEARCH_BOUND).unwrap();
        let f = gen_family_quat(&base(), &g1, 5).unwrap();
        for i in &f.members {
            assert_eq!(det_b_quat(&i.product, &i.product), int(0));
            for j in &f.members {
                assert_eq!(
                    det_b_quat(&i.product, &j.product),
                    det_b_quat_direct(&i.product, &j.product)
                );
            }
        }
    }

    #[test]
    fn rejects_bad_bases() {
        let g1 = find_gamma1(h23(), GAMMA1_SEARCH_BOUND).unwrap();
        let g = Quaternion::new(h23(), int(2), int(1), int(0), int(0));
        assert!(gen_family_quat(&g, &g1, 2).is_err());
        let sq = QuatAlgebra::new(4, 3).unwrap();
        let g = Quaternion::new(sq, int(1), int(0), int(0), int(0));
        assert!(matches!(
            check_family_base(&g),
            Err(Error::PerfectSquare(_))
        ));
    }
}
