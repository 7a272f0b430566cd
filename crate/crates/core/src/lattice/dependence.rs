//! ℤ-linear relations among 2×2 matrices, viewed as vectors in `Q⁴`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linalg::{inverse, rank, rational_nullspace, QMatrix};
use crate::numeric::rational::{from_bigint, lcm_of_denominators, BigRational};
use crate::sl2::{a_of_lambda, Mat2};

/// The 4×n matrix whose columns are the row-major flattenings of `elems`.
pub fn flatten(elems: &[Mat2<BigRational>]) -> QMatrix {
    QMatrix::from_fn(4, elems.len(), |i, j| elems[j].entries()[i].clone())
}

/// A relation `Σ mᵢ·elemᵢ = 0` with integer coefficients, not all zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependenceWitness {
    pub coefficients: Vec<BigInt>,
    pub elements: Vec<Mat2<BigRational>>,
}

impl DependenceWitness {
    pub fn combination(&self) -> Mat2<BigRational> {
        self.coefficients
            .iter()
            .zip(&self.elements)
            .fold(Mat2::zero(), |acc, (m, e)| {
                acc.add(&e.scale(&from_bigint(m)))
            })
    }

    pub fn verify(&self) -> bool {
        self.coefficients.len() == self.elements.len()
            && self.coefficients.iter().any(|m| !m.is_zero())
            && self.combination() == Mat2::zero()
    }
}

/// The first kernel vector of the flattening, or `None` when the elements
/// are linearly independent.
pub fn integer_dependence(elems: &[Mat2<BigRational>]) -> Option<DependenceWitness> {
    let kernel = rational_nullspace(&flatten(elems));
    kernel
        .into_iter()
        .next()
        .map(|coefficients| DependenceWitness {
            coefficients,
            elements: elems.to_vec(),
        })
}

/// Five vectors in a four-dimensional space are always dependent.
pub fn five_dependence(elems: &[Mat2<BigRational>; 5]) -> DependenceWitness {
    integer_dependence(elems).expect("a 4x5 system has a nontrivial kernel")
}

/// A fixed integer `m0` such that every element of the rational span of the
/// basis that lies in the same lattice satisfies `Σ mᵢ bᵢ = m0·γ` with
/// integer `mᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanMultiplier {
    pub m0: BigInt,
    /// Rows of the flattening forming the invertible square block `Ã`.
    pub rows: Vec<usize>,
    inverse: QMatrix,
    basis: Vec<Mat2<BigRational>>,
    /// Left factor mapping the basis into integer matrices, when the basis is
    /// not integral to begin with.
    transform: Option<Mat2<BigRational>>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Builds the multiplier from `n <= 4` independent elements.
///
/// Coset elements `gγᵢ` are first moved to `Γ` by left multiplication with
/// `(gγ₁)⁻¹`, which preserves all linear relations. `Ã` is the first
/// invertible `n×n` row block in lexicographic order and `m0` the lcm of the
/// denominators of `Ã⁻¹`.
pub fn span_multiplier(basis: &[Mat2<BigRational>]) -> Result<SpanMultiplier> {
    let n = basis.len();
    if n == 0 || n > 4 {
        return Err(Error::Precondition(format!(
            "span basis needs 1..=4 elements, got {n}"
        )));
    }
    let transform = if basis.iter().all(Mat2::is_integral) {
        None
    } else {
        let b0 = &basis[0];
        let d = b0.det();
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Some(b0.adjugate().map(|v| v / &d))
    };
    let moved: Vec<Mat2<BigRational>> = match &transform {
        Some(t) => basis.iter().map(|b| t.mul(b)).collect(),
        None => basis.to_vec(),
    };
    let a = flatten(&moved);
    if rank(&a) < n {
        return Err(Error::DependentBasis);
    }
    for rows in combinations(4, n) {
        if let Ok(inv) = inverse(&a.select_rows(&rows)) {
            let m0 = lcm_of_denominators(inv.to_rows().iter().flatten());
            return Ok(SpanMultiplier {
                m0,
                rows,
                inverse: inv,
                basis: basis.to_vec(),
                transform,
            });
        }
    }
    Err(Error::DependentBasis)
}

impl SpanMultiplier {
    pub fn basis(&self) -> &[Mat2<BigRational>] {
        &self.basis
    }

    /// Integer `(m₁..mₙ)` with `Σ mᵢ bᵢ = m0·γ`, verified exactly.
    pub fn solve(&self, gamma: &Mat2<BigRational>) -> Result<Vec<BigInt>> {
        let moved = match &self.transform {
            Some(t) => t.mul(gamma),
            None => gamma.clone(),
        };
        let entries = moved.entries();
        let rhs: Vec<BigRational> = self.rows.iter().map(|&r| entries[r].clone()).collect();
        let m0 = from_bigint(&self.m0);
        let coeffs: Vec<BigRational> = self
            .inverse
            .mul_vec(&rhs)
            .into_iter()
            .map(|c| c * &m0)
            .collect();
        let combo = coeffs
            .iter()
            .zip(&self.basis)
            .fold(Mat2::zero(), |acc, (c, b)| acc.add(&b.scale(c)));
        if combo != gamma.scale(&m0) {
            return Err(Error::NotInSpan);
        }
        if !coeffs.iter().all(|c| c.is_integer()) {
            return Err(Error::Precondition(
                "element is not in the lattice spanned with the basis".into(),
            ));
        }
        Ok(coeffs.into_iter().map(|c| c.to_integer()).collect())
    }
}

/// A curve point `(gγ)^t`, recorded by its exact endpoint `gγ` and modified
/// time `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePointData {
    pub product: Mat2<BigRational>,
    pub lambda: f64,
}

impl CurvePointData {
    pub fn trace(&self) -> f64 {
        self.product.trace().to_f64().unwrap_or(f64::NAN)
    }

    pub fn a_lambda(&self) -> f64 {
        a_of_lambda(self.lambda, self.trace())
    }

    /// `[a(λ) - tr·λ/2]·I + λ·gγ`.
    pub fn point(&self) -> Mat2<f64> {
        let tr = self.trace();
        let c = self.a_lambda() - 0.5 * tr * self.lambda;
        let p = self.product.to_f64();
        Mat2::new(
            c + self.lambda * p.x,
            self.lambda * p.y,
            self.lambda * p.z,
            c + self.lambda * p.w,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    /// `|Σ mᵢ λᵢ|`
    pub lambda_residual: f64,
    /// `|Σ mᵢ a(λᵢ)|`
    pub a_residual: f64,
    /// Largest entry of `Σ mᵢ (gγᵢ)^{tᵢ}`.
    pub matrix_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub const PROJECTION_TOLERANCE: f64 = 1e-9;

/// Checks that a relation among curve points whose endpoints share their
/// upper-right entry forces the same relation on `λᵢ` and on `a(λᵢ)`.
pub fn dependence_projects_to_times(
    coefficients: &[BigInt],
    points: &[CurvePointData],
) -> Result<ProjectionReport> {
    if coefficients.len() != points.len() {
        return Err(Error::Precondition(format!(
            "{} coefficients for {} points",
            coefficients.len(),
            points.len()
        )));
    }
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.product.y != first.product.y) {
            return Err(Error::Precondition(
                "curve endpoints must share their upper-right entry".into(),
            ));
        }
    }
    let ms: Vec<f64> = coefficients
        .iter()
        .map(|m| m.to_f64().unwrap_or(f64::NAN))
        .collect();
    let lambda_residual = ms
        .iter()
        .zip(points)
        .map(|(m, p)| m * p.lambda)
        .sum::<f64>()
        .abs();
    let a_residual = ms
        .iter()
        .zip(points)
        .map(|(m, p)| m * p.a_lambda())
        .sum::<f64>()
        .abs();
    let sum = ms
        .iter()
        .zip(points)
        .fold(Mat2::<f64>::zero(), |acc, (m, p)| {
            acc.add(&p.point().scale(m))
        });
    let matrix_residual = sum.max_abs_diff(&Mat2::zero());
    let tolerance = PROJECTION_TOLERANCE;
    Ok(ProjectionReport {
        lambda_residual,
        a_residual,
        matrix_residual,
        tolerance,
        passed: lambda_residual <= tolerance && a_residual <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    fn q(x: i64, y: i64, z: i64, w: i64) -> Mat2<BigRational> {
        Mat2::new(int(x), int(y), int(z), int(w))
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unipotent_powers() {
        let elems = [
            q(1, 0, 0, 1),
            q(1, 1, 0, 1),
            q(1, 2, 0, 1),
            q(1, 3, 0, 1),
            q(1, 4, 0, 1),
        ];
        let w = five_dependence(&elems);
        assert_eq!(w.coefficients, big(&[1, -2, 1, 0, 0]));
        assert!(w.verify());
    }

    #[test]
    fn repetition() {
        let elems = [
            q(1, 0, 0, 1),
            q(1, 0, 0, 1),
            q(2, 1, 1, 1),
            q(1, 1, 1, 2),
            q(3, 2, 4, 3),
        ];
        assert_eq!(five_dependence(&elems).coefficients, big(&[1, -1, 0, 0, 0]));
    }

    #[test]
    fn span_of_identity() {
        let s = span_multiplier(&[q(1, 0, 0, 1)]).unwrap();
        assert_eq!(s.m0, BigInt::from(1));
        assert_eq!(s.solve(&q(1, 0, 0, 1)).unwrap(), big(&[1]));
        assert_eq!(s.solve(&q(1, 1, 0, 1)), Err(Error::NotInSpan));
    }

    #[test]
    fn span_recovers_basis_element() {
        let basis = [q(1, 0, 0, 1), q(1, 1, 0, 1)];
        let s = span_multiplier(&basis).unwrap();
        let m0 = s.m0.clone();
        assert_eq!(
            s.solve(&basis[0]).unwrap(),
            vec![m0.clone(), BigInt::zero()]
        );
        assert_eq!(s.solve(&basis[1]).unwrap(), vec![BigInt::zero(), m0]);
    }

    #[test]
    fn span_rejects_dependent_basis() {
        assert_eq!(
            span_multiplier(&[q(1, 0, 0, 1), q(2, 0, 0, 2)]).unwrap_err(),
            Error::DependentBasis
        );
    }

    #[test]
    fn span_of_coset_elements() {
        let g = Mat2::new(rat(1, 2), int(0), int(3), int(2));
        let gammas = [q(1, 0, 0, 1), q(1, 1, 0, 1), q(1, 0, 1, 1)];
        let basis: Vec<_> = gammas.iter().map(|c| g.mul(c)).collect();
        let s = span_multiplier(&basis).unwrap();
        // the span consists of matrices with equal diagonal entries
        assert_eq!(s.solve(&g.mul(&q(3, 1, 2, 1))), Err(Error::NotInSpan));
        let target = g.mul(&q(1, 2, 0, 1));
        let m = s.solve(&target).unwrap();
        let combo = m.iter().zip(&basis).fold(Mat2::zero(), |acc, (c, b)| {
            acc.add(&b.scale(&from_bigint(c)))
        });
        assert_eq!(combo, target.scale(&from_bigint(&s.m0)));
    }

    #[test]
    fn projection_of_dependent_points() {
        // one member, trace 3: (λ, a(λ)) = (0, 1), (1, 3/2), (8/19, 21/19)
        let g = q(4, 1, -5, -1);
        let pts: Vec<_> = [0.0, 1.0, 8.0 / 19.0]
            .iter()
            .map(|&lambda| CurvePointData {
                product: g.clone(),
                lambda,
            })
            .collect();
        let report = dependence_projects_to_times(&big(&[-9, -8, 19]), &pts).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.matrix_residual < 1e-12);
        let corrupted = dependence_projects_to_times(&big(&[-9, -8, 20]), &pts).unwrap();
        assert!(!corrupted.passed);
        assert!(corrupted.lambda_residual > 1e-3);
    }

    #[test]
    fn projection_edge_cases() {
        let p = CurvePointData {
            product: q(2, 1, 1, 1),
            lambda: 0.3,
        };
        assert!(
            dependence_projects_to_times(&big(&[0]), std::slice::from_ref(&p))
                .unwrap()
                .passed
        );
        let other = CurvePointData {
            product: q(1, 2, 0, 1),
            lambda: 0.3,
        };
        assert!(dependence_projects_to_times(&big(&[1, 1]), &[p, other]).is_err());
    }
}
