//! Metric-minimal representatives of floating cosets `gΓ`.
//!
//! Right multiplication by `γ ∈ SL(2, Z)` changes the columns of `g` to a new
//! basis of the plane lattice `L = g·Z²`. Minimizing `‖gγ - I‖_F` therefore
//! means choosing a basis `(c₁, c₂)` of `L` with `c₁` near `e₁` and `c₂` near
//! `e₂`. After Lagrange–Gauss reduction the candidates for `c₁` are the
//! primitive lattice points in the disc of radius `best` around `e₁`, which
//! are enumerated exactly; for each of them the best complementary column is
//! a one-dimensional rounding problem. The result is the global minimizer,
//! not merely the best point in a window.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::sl2::{dot2, Mat2};

/// Inputs with `‖g‖²_F / |det g|` above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Upper limit on enumerated lattice points per call; only reachable deep in
/// the cusp, where the coset is far from the identity anyway.
const MAX_POINTS: f64 = 5e7;

const DET_TOLERANCE: f64 = 1e-6;

fn column(b: &Mat2<f64>, v1: i64, v2: i64) -> (f64, f64) {
    let (a, c) = (v1 as f64, v2 as f64);
    (dot2(b.x, a, b.y, c), dot2(b.z, a, b.w, c))
}

fn precheck(g: &Mat2<f64>) -> Result<()> {
    if !g.is_finite() {
        return Err(Error::Precondition("matrix has non-finite entries".into()));
    }
    let det = g.det();
    let fro = g.frobenius();
    let condition = fro * fro / det.abs();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    if (det - 1.0).abs() > DET_TOLERANCE {
        return Err(Error::NotUnimodular {
            det: format!("{det}"),
        });
    }
    Ok(())
}

/// Lagrange–Gauss reduction of the column lattice of `g`; returns the
/// unimodular change of basis `U` so that `gU` has a shortest first column
/// and `|⟨b₁, b₂⟩| <= ‖b₁‖²/2`.
pub fn gauss_reduce(g: &Mat2<f64>) -> Mat2<i64> {
    let mut u1 = (1i64, 0i64);
    let mut u2 = (0i64, 1i64);
    for _ in 0..10_000 {
        let b1 = column(g, u1.0, u1.1);
        let b2 = column(g, u2.0, u2.1);
        let n1 = b1.0 * b1.0 + b1.1 * b1.1;
        let n2 = b2.0 * b2.0 + b2.1 * b2.1;
        if n2 < n1 {
            // (b₁, b₂) -> (b₂, -b₁) keeps the orientation
            (u1, u2) = (u2, (-u1.0, -u1.1));
            continue;
        }
        let mu = ((b1.0 * b2.0 + b1.1 * b2.1) / n1).round();
        if mu == 0.0 || !mu.is_finite() {
            break;
        }
        let m = mu as i64;
        u2 = (u2.0 - m * u1.0, u2.1 - m * u1.1);
    }
    Mat2::new(u1.0, u2.0, u1.1, u2.1)
}

fn lex_less(a: &Mat2<i64>, b: &Mat2<i64>) -> bool {
    a.to_flat() < b.to_flat()
}

/// Least `‖bV - I‖²` over `V ∈ SL(2, Z)` strictly below `best_sq`, or the
/// incoming `best` when nothing improves on it.
fn search(
    b: &Mat2<f64>,
    mut best_sq: f64,
    mut best: Option<Mat2<i64>>,
) -> Result<(f64, Option<Mat2<i64>>)> {
    let n1 = b.x * b.x + b.z * b.z;
    let det = b.det();
    let mu = (b.x * b.y + b.z * b.w) / n1;
    let n2s = det * det / n1;
    // B⁻¹ e₁
    let (w1, w2) = (b.w / det, -b.z / det);
    let slack = 1.0 + 1e-9;
    let r = (best_sq * slack).sqrt();
    let span2 = r / n2s.sqrt();
    let (lo2, hi2) = ((w2 - span2).ceil(), (w2 + span2).floor());
    let estimate = (hi2 - lo2 + 1.0).max(0.0) * (2.0 * r / n1.sqrt() + 1.0);
    if !(estimate <= MAX_POINTS) {
        let fro = b.frobenius();
        return Err(Error::IllConditioned {
            condition: fro * fro / det.abs(),
        });
    }
    for v2 in lo2 as i64..=hi2 as i64 {
        let d2 = v2 as f64 - w2;
        let rem = best_sq * slack - d2 * d2 * n2s;
        if rem < 0.0 {
            continue;
        }
        let c = w1 - mu * d2;
        let span1 = (rem / n1).sqrt();
        for v1 in (c - span1).ceil() as i64..=(c + span1).floor() as i64 {
            if v1.gcd(&v2) != 1 {
                continue;
            }
            let (px, py) = column(b, v1, v2);
            let e = (px - 1.0) * (px - 1.0) + py * py;
            if e > best_sq {
                continue;
            }
            let eg = v1.extended_gcd(&v2);
            let (x, y) = if eg.gcd < 0 {
                (-eg.x, -eg.y)
            } else {
                (eg.x, eg.y)
            };
            // det [[v1, -y], [v2, x]] = v1 x + v2 y = 1
            let (q1, q2) = (-y, x);
            let (qx, qy) = column(b, q1, q2);
            let pp = px * px + py * py;
            let m_star = -(qx * px + (qy - 1.0) * py) / pp;
            if !m_star.is_finite() {
                continue;
            }
            let m0 = m_star.floor() as i64;
            for m in [m0, m0 + 1] {
                let (c1, c2) = (q1 + m * v1, q2 + m * v2);
                let (sx, sy) = column(b, c1, c2);
                let val = e + sx * sx + (sy - 1.0) * (sy - 1.0);
                let cand = Mat2::new(v1, c1, v2, c2);
                let better = match &best {
                    _ if val < best_sq => true,
                    Some(cur) => val == best_sq && lex_less(&cand, cur),
                    None => val == best_sq,
                };
                if better {
                    best_sq = val;
                    best = Some(cand);
                }
            }
        }
    }
    Ok((best_sq, best))
}

fn mul_i64(a: &Mat2<i64>, b: &Mat2<i64>) -> Result<Mat2<i64>> {
    let f = |p: i64, q: i64, r: i64, s: i64| -> Result<i64> {
        let v = p as i128 * q as i128 + r as i128 * s as i128;
        i64::try_from(v).map_err(|_| Error::Consistency("lattice element overflows i64".into()))
    };
    Ok(Mat2::new(
        f(a.x, b.x, a.y, b.z)?,
        f(a.x, b.y, a.y, b.w)?,
        f(a.z, b.x, a.w, b.z)?,
        f(a.z, b.y, a.w, b.w)?,
    ))
}

/// The representative `gγ` of `gΓ` nearest to the identity in Frobenius norm,
/// together with `γ`.
pub fn canonical_rep_with_gamma(g: &Mat2<f64>) -> Result<(Mat2<f64>, Mat2<i64>)> {
    precheck(g)?;
    let u = gauss_reduce(g);
    let b = g.mul_int(&u);
    let start = b.dist_to_identity();
    let (_, v) = search(&b, start * start, Some(Mat2::new(1, 0, 0, 1)))?;
    let v = v.expect("search keeps the starting basis");
    Ok((b.mul_int(&v), mul_i64(&u, &v)?))
}

pub fn canonical_rep(g: &Mat2<f64>) -> Result<Mat2<f64>> {
    Ok(canonical_rep_with_gamma(g)?.0)
}

/// `min(min_γ ‖hγ - I‖_F, cap)`. With a small cap only a handful of lattice
/// points are visited.
pub fn distance_to_identity_capped(h: &Mat2<f64>, cap: f64) -> Result<f64> {
    precheck(h)?;
    let u = gauss_reduce(h);
    let b = h.mul_int(&u);
    let start = b.dist_to_identity();
    let (best_sq, found) = if start < cap {
        search(&b, start * start, Some(Mat2::new(1, 0, 0, 1)))?
    } else {
        search(&b, cap * cap, None)?
    };
    Ok(if found.is_some() {
        best_sq.sqrt().min(cap)
    } else {
        cap
    })
}

fn relative(p: &Mat2<f64>, q: &Mat2<f64>) -> Result<Mat2<f64>> {
    let d = p.det();
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Singular);
    }
    Ok(p.inverse().mul(q))
}

/// `‖canonical_rep(p⁻¹q) - I‖_F`.
///
/// This is invariant under `(p, q) -> (hp, hq)` and under `q -> qγ`. It is not
/// symmetric in general: `p⁻¹q` and its inverse can sit at different
/// distances from their nearest lattice translates.
pub fn coset_distance(p: &Mat2<f64>, q: &Mat2<f64>) -> Result<f64> {
    distance_to_identity_capped(&relative(p, q)?, f64::INFINITY)
}

pub fn coset_distance_capped(p: &Mat2<f64>, q: &Mat2<f64>, cap: f64) -> Result<f64> {
    distance_to_identity_capped(&relative(p, q)?, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn brute(g: &Mat2<f64>, bound: i64) -> f64 {
        let mut best = f64::INFINITY;
        for a in -bound..=bound {
            for c in -bound..=bound {
                for b in -bound..=bound {
                    for d in -bound..=bound {
                        if a * d - b * c == 1 {
                            best = best.min(g.mul_int(&Mat2::new(a, b, c, d)).dist_to_identity());
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn identity_is_fixed() {
        let (rep, gamma) = canonical_rep_with_gamma(&Mat2::identity()).unwrap();
        assert_eq!(rep, Mat2::identity());
        assert_eq!(gamma, Mat2::new(1, 0, 0, 1));
    }

    #[test]
    fn lattice_elements_reduce_to_identity() {
        let gamma = Mat2::new(13.0, 8.0, 21.0, 13.0);
        assert!(
            canonical_rep(&gamma)
                .unwrap()
                .max_abs_diff(&Mat2::identity())
                < 1e-12
        );
    }

    #[test]
    fn diagonal_distance_matches_brute_force() {
        let d = Mat2::diag(E, 1.0 / E);
        let fast = coset_distance(&Mat2::identity(), &d).unwrap();
        assert!(fast > 0.0);
        assert!((fast - brute(&d, 6)).abs() < 1e-12);
    }

    #[test]
    fn capped_distance_is_min_with_cap() {
        let d = Mat2::diag(E, 1.0 / E);
        let full = coset_distance(&Mat2::identity(), &d).unwrap();
        assert_eq!(
            coset_distance_capped(&Mat2::identity(), &d, 0.5).unwrap(),
            0.5
        );
        assert!((coset_distance_capped(&Mat2::identity(), &d, 10.0).unwrap() - full).abs() < 1e-15);
    }

    #[test]
    fn rejects_ill_conditioned_and_non_unimodular() {
        assert!(matches!(
            canonical_rep(&Mat2::diag(1e7, 1e-7)),
            Err(Error::IllConditioned { .. })
        ));
        assert!(matches!(
            canonical_rep(&Mat2::diag(2.0, 1.0)),
            Err(Error::NotUnimodular { .. })
        ));
    }
}
