use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::CosetRep;
use crate::numeric::rational::{from_bigint, BigRational};
use crate::sl2::Mat2;

/// Largest family accepted by [`gen_family`].
pub const MAX_FAMILY: usize = 1000;

/// One evasion element `γ = [[p, 1], [ps - 1, s]]` with `p = 2nb²` and
/// `s = (a - 2a²)n`, where `x = a/b` is the diagonal entry of the coset
/// representative. Then `tr(gγ) = z + nb`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    /// Position in the family, starting at 1.
    pub index: usize,
    pub n: BigInt,
    pub gamma: Mat2<BigInt>,
    /// `gγ`, exact.
    pub product: Mat2<BigRational>,
    /// `C = z + nb`.
    pub trace: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvasionFamily {
    pub g: CosetRep,
    pub a: BigInt,
    pub b: BigInt,
    pub z: BigRational,
    pub first_n: BigInt,
    pub members: Vec<FamilyMember>,
}

/// `(a, b, z)` for a normalized representative `[[a/b, 0], [z, b/a]]`.
pub fn family_params(g: &CosetRep) -> Result<(BigInt, BigInt, BigRational)> {
    if !g.normalized {
        return Err(Error::Precondition(
            "evasion families need a normalized coset representative".into(),
        ));
    }
    Ok((g.x().numer().clone(), g.x().denom().clone(), g.z().clone()))
}

/// Least `n >= 1` with `z + nb > 2`.
pub fn first_index(b: &BigInt, z: &BigRational) -> BigInt {
    // z + nb > 2  <=>  n > (2 - z)/b
    let bound = (BigRational::from_integer(BigInt::from(2)) - z) / from_bigint(b);
    let n: BigInt = bound.floor().to_integer() + 1;
    n.max(BigInt::one())
}

/// The member for an arbitrary `n`, without any range check.
pub fn family_member(g: &CosetRep, index: usize, n: &BigInt) -> Result<FamilyMember> {
    let (a, b, z) = family_params(g)?;
    let p = BigInt::from(2) * n * &b * &b;
    let s = (&a - BigInt::from(2) * &a * &a) * n;
    let gamma = Mat2::new(p.clone(), BigInt::one(), &p * &s - 1, s);
    let product = g.g.mul(&gamma.to_rational());
    let trace = z + from_bigint(&(n * &b));
    Ok(FamilyMember {
        index,
        n: n.clone(),
        gamma,
        product,
        trace,
    })
}

fn verify_member(m: &FamilyMember) -> Result<()> {
    if !m.gamma.det().is_one() {
        return Err(Error::Consistency(format!(
            "det γ ≠ 1 for member {}",
            m.index
        )));
    }
    if m.product.trace() != m.trace {
        return Err(Error::Consistency(format!(
            "tr(gγ) ≠ z + nb for member {}",
            m.index
        )));
    }
    Ok(())
}

/// The first `count` members with consecutive `n` starting at the least
/// admissible one. All invariants are checked exactly before returning.
pub fn gen_family(g: &CosetRep, count: usize) -> Result<EvasionFamily> {
    if count > MAX_FAMILY {
        return Err(Error::Precondition(format!(
            "family size {count} exceeds {MAX_FAMILY}"
        )));
    }
    let (a, b, z) = family_params(g)?;
    let first_n = first_index(&b, &z);
    let members = (0..count)
        .map(|k| family_member(g, k + 1, &(&first_n + k)))
        .collect::<Result<Vec<_>>>()?;
    let two = BigRational::from_integer(BigInt::from(2));
    for m in &members {
        verify_member(m)?;
    }
    if let Some(first) = members.first() {
        if first.trace <= two {
            return Err(Error::Consistency("first trace is not above 2".into()));
        }
    }
    for w in members.windows(2) {
        if w[1].trace <= w[0].trace || w[1].trace.denom() != w[0].trace.denom() {
            return Err(Error::Consistency(
                "traces must increase with one common denominator".into(),
            ));
        }
    }
    Ok(EvasionFamily {
        g: g.clone(),
        a,
        b,
        z,
        first_n,
        members,
    })
}

impl EvasionFamily {
    /// Member with family index `index` (1-based), including ones past the
    /// generated prefix.
    pub fn member(&self, index: usize) -> Result<FamilyMember> {
        if index == 0 {
            return Err(Error::IndexOutOfRange {
                index,
                what: "evasion family (1-based)",
            });
        }
        if let Some(m) = self.members.get(index - 1) {
            return Ok(m.clone());
        }
        let m = family_member(&self.g, index, &(&self.first_n + (index - 1)))?;
        verify_member(&m)?;
        Ok(m)
    }

    /// The member whose parameter equals `n`.
    pub fn member_by_n(&self, n: &BigInt) -> Result<FamilyMember> {
        let offset = n - &self.first_n;
        if offset.is_negative() {
            return Err(Error::Precondition(format!(
                "n = {n} precedes the first admissible n = {}",
                self.first_n
            )));
        }
        let index = usize::try_from(offset + 1)
            .map_err(|_| Error::Precondition(format!("n = {n} is too large")))?;
        self.member(index)
    }
}

/// `u(n) = (4ab - b)n - z` and `z(n) = b³(2 - 4a)n² + 2zb²n - b/a`.
pub fn closed_forms_at(
    a: &BigInt,
    b: &BigInt,
    z: &BigRational,
    n: &BigRational,
) -> (BigRational, BigRational) {
    let (ar, br) = (from_bigint(a), from_bigint(b));
    let four = BigRational::from_integer(BigInt::from(4));
    let two = BigRational::from_integer(BigInt::from(2));
    let u = (&four * &ar * &br - &br) * n - z;
    let b3 = &br * &br * &br;
    let zz = b3 * (&two - &four * &ar) * n * n + &two * z * &br * &br * n - &br / &ar;
    (u, zz)
}

/// The closed forms for `x_i - w_i` and the lower-left entry of `gγ_i`,
/// checked against the matrix itself.
pub fn entry_closed_forms(
    family: &EvasionFamily,
    index: usize,
) -> Result<(BigRational, BigRational)> {
    let m = family.member(index)?;
    let (u, zz) = closed_forms_at(&family.a, &family.b, &family.z, &from_bigint(&m.n));
    if u != &m.product.x - &m.product.w {
        return Err(Error::Consistency(format!(
            "u closed form disagrees for member {index}"
        )));
    }
    if zz != m.product.z {
        return Err(Error::Consistency(format!(
            "z closed form disagrees for member {index}"
        )));
    }
    Ok((u, zz))
}
