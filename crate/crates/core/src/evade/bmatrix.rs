//! The 4×4 matrix `B(i, j)` relating the modified times of two curve points
//! to the entries of `[(gγᵢ)^{tᵢ}]⁻¹ (gγⱼ)^{tⱼ}`:
//!
//! `B(i,j) · (a(λᵢ)a(λⱼ), λᵢa(λⱼ), a(λᵢ)λⱼ, λᵢλⱼ)ᵀ` lists the entries of that
//! product in row-major order.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::lattice::BiPoly;
use crate::numeric::linalg::{determinant, QMatrix};
use crate::numeric::rational::{from_bigint, BigRational};
use crate::sl2::Mat2;

use super::family::{closed_forms_at, EvasionFamily};

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn quarter() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(4))
}

/// `B(i, j)` from the entries `(x, y, z, w)` of `gγᵢ` and `gγⱼ`.
pub fn build_b(ei: &Mat2<BigRational>, ej: &Mat2<BigRational>) -> QMatrix {
    let (xi, yi, zi, wi) = (&ei.x, &ei.y, &ei.z, &ei.w);
    let (xj, yj, zj, wj) = (&ej.x, &ej.y, &ej.z, &ej.w);
    let (h, q) = (half(), quarter());
    let zero = BigRational::from_integer(BigInt::from(0));
    let one = BigRational::one();
    let wx_i = wi - xi;
    let xw_i = xi - wi;
    let wx_j = wj - xj;
    let xw_j = xj - wj;
    QMatrix::from_rows(vec![
        vec![
            one.clone(),
            &h * &wx_i,
            &h * &xw_j,
            &q * &wx_i * &xw_j - yi * zj,
        ],
        vec![
            zero.clone(),
            -yi.clone(),
            yj.clone(),
            &h * yj * &wx_i - &h * yi * &wx_j,
        ],
        vec![
            zero,
            -zi.clone(),
            zj.clone(),
            &h * zj * &xw_i - &h * zi * &xw_j,
        ],
        vec![one, &h * &xw_i, &h * &wx_j, &q * &xw_i * &wx_j - zi * yj],
    ])
}

/// Floating evaluation of `B(i,j)` applied to the modified-time vector.
pub fn apply_b(b: &QMatrix, lambda_i: f64, a_i: f64, lambda_j: f64, a_j: f64) -> Mat2<f64> {
    let v = [
        a_i * a_j,
        lambda_i * a_j,
        a_i * lambda_j,
        lambda_i * lambda_j,
    ];
    let row = |r: usize| {
        (0..4)
            .map(|c| crate::numeric::rational::to_f64(&b[(r, c)]) * v[c])
            .sum::<f64>()
    };
    Mat2::new(row(0), row(1), row(2), row(3))
}

/// `x(uᵢ²zⱼ + uⱼ²zᵢ - uᵢuⱼ(zᵢ + zⱼ) - x(zⱼ - zᵢ)²)` with `u = x - w` and `z`
/// the lower-left entry. Valid when both upper-right entries equal `x`.
pub fn det_b_formula(
    x: &BigRational,
    ui: &BigRational,
    zi: &BigRational,
    uj: &BigRational,
    zj: &BigRational,
) -> BigRational {
    let dz = zj - zi;
    x * (ui * ui * zj + uj * uj * zi - ui * uj * (zi + zj) - x * &dz * &dz)
}

pub fn det_b_closed(family: &EvasionFamily, i: usize, j: usize) -> Result<BigRational> {
    let (mi, mj) = (family.member(i)?, family.member(j)?);
    let x = family.g.x();
    let (ei, ej) = (&mi.product, &mj.product);
    Ok(det_b_formula(
        x,
        &(&ei.x - &ei.w),
        &ei.z,
        &(&ej.x - &ej.w),
        &ej.z,
    ))
}

/// Direct exact determinant of [`build_b`].
pub fn det_b_direct(family: &EvasionFamily, i: usize, j: usize) -> Result<BigRational> {
    let (mi, mj) = (family.member(i)?, family.member(j)?);
    Ok(determinant(&build_b(&mi.product, &mj.product)))
}

/// `det B(i,j)` as a polynomial in `X = nⱼ` and `Y = nᵢ`, obtained by
/// substituting the closed forms of `u` and `z`.
pub fn det_b_polynomial(family: &EvasionFamily) -> BiPoly {
    let one = BigRational::one();
    let (u1, z1) = closed_forms_at(&family.a, &family.b, &family.z, &one);
    let (u0, z0) = closed_forms_at(
        &family.a,
        &family.b,
        &family.z,
        &BigRational::from_integer(BigInt::from(0)),
    );
    let (_, zm) = closed_forms_at(&family.a, &family.b, &family.z, &-one.clone());
    // u(n) = u0 + (u1 - u0) n; z(n) = z0 + c1 n + c2 n², from three samples
    let du = &u1 - &u0;
    let c2 = (&z1 + &zm - &z0 - &z0) / BigRational::from_integer(BigInt::from(2));
    let c1 = (&z1 - &zm) / BigRational::from_integer(BigInt::from(2));
    let affine = |v: BiPoly| BiPoly::constant(u0.clone()).add(&v.scale(&du));
    let quad = |v: BiPoly| {
        BiPoly::constant(z0.clone())
            .add(&v.scale(&c1))
            .add(&v.mul(&v).scale(&c2))
    };
    let (uj, zj) = (affine(BiPoly::x()), quad(BiPoly::x()));
    let (ui, zi) = (affine(BiPoly::y()), quad(BiPoly::y()));
    let x = BiPoly::constant(family.g.x().clone());
    let dz = zj.sub(&zi);
    let inner = ui
        .mul(&ui)
        .mul(&zj)
        .add(&uj.mul(&uj).mul(&zi))
        .sub(&ui.mul(&uj).mul(&zi.add(&zj)))
        .sub(&x.mul(&dz).mul(&dz));
    x.mul(&inner)
}

/// `-a²b⁴(2 - 4a)²`, the coefficient of `nⱼ⁴` in `det B(i, j)`.
pub fn det_b_leading(family: &EvasionFamily) -> BigRational {
    let a = &family.a;
    let b = &family.b;
    let t = BigInt::from(2) - BigInt::from(4) * a;
    from_bigint(&-(a * a * b * b * b * b * &t * &t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evade::family::gen_family;
    use crate::lattice::CosetRep;
    use crate::numeric::rational::{int, rat};
    use crate::sl2::a_of_lambda;

    fn family() -> EvasionFamily {
        gen_family(
            &CosetRep::new(Mat2::new(int(1), int(0), int(1), int(1))).unwrap(),
            6,
        )
        .unwrap()
    }

    #[test]
    fn diagonal_pairs_vanish() {
        let f = family();
        for i in 1..=4 {
            assert_eq!(det_b_closed(&f, i, i).unwrap(), int(0));
            assert_eq!(det_b_direct(&f, i, i).unwrap(), int(0));
        }
    }

    #[test]
    fn closed_form_matches_direct_determinant() {
        let f = family();
        let (i, j) = (1, 2);
        let closed = det_b_closed(&f, i, j).unwrap();
        assert_ne!(closed, int(0));
        assert_eq!(closed, det_b_direct(&f, i, j).unwrap());
    }

    #[test]
    fn polynomial_matches_closed_form_and_leading_term() {
        let g = CosetRep::new(Mat2::new(rat(2, 3), int(0), rat(-7, 5), rat(3, 2))).unwrap();
        let f = gen_family(&g, 5).unwrap();
        let p = det_b_polynomial(&f);
        assert_eq!(p.degree_x(), Some(4));
        assert_eq!(p.coefficient_of_x(4), BiPoly::constant(det_b_leading(&f)));
        for i in 1..=5 {
            for j in 1..=5 {
                let (ni, nj) = (
                    from_bigint(&f.member(i).unwrap().n),
                    from_bigint(&f.member(j).unwrap().n),
                );
                assert_eq!(p.eval(&nj, &ni), det_b_closed(&f, i, j).unwrap());
            }
        }
    }

    #[test]
    fn product_relation_with_equal_times_gives_identity() {
        let f = family();
        let e = &f.member(2).unwrap().product;
        let b = build_b(e, e);
        let tr = crate::numeric::rational::to_f64(&e.trace());
        let l = 0.37;
        let a = a_of_lambda(l, tr);
        let prod = apply_b(&b, l, a, l, a);
        assert!(prod.max_abs_diff(&Mat2::identity()) < 1e-9);
    }
}
