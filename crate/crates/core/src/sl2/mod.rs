//! Closed-form analysis on `SL(2, R)`: exponential and logarithm of 2×2
//! matrices, the powers `g^t = exp(t log g)`, and the modified-time
//! reparameterization under which a curve point is affine in `λ`.
//!
//! For traceless `X = [[a, b], [c, -a]]` put `δ = a² + bc`. Then
//! `exp(X) = C(δ)·I + S(δ)·X` where `C(δ) = cosh √δ`, `S(δ) = sinh √δ / √δ`
//! for `δ > 0`, the trigonometric versions for `δ < 0`, and `C = S = 1` at
//! `δ = 0`. Both are entire in `δ`; near zero they are summed as series.

mod mat2;

use num_bigint::BigInt;
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::rational::{to_f64, BigRational};

pub use mat2::{dot2, Mat2, Scalar};

/// Below this ω the hyperbolic ratios are evaluated from Taylor series.
pub const SERIES_OMEGA: f64 = 1e-4;

/// Tolerance used to decide that a floating trace sits on ±2.
pub const TRACE_EPSILON: f64 = 1e-12;

/// Default number of uniform samples along a connecting curve.
pub const DEFAULT_SAMPLE_DENSITY: usize = 10_000;

const FACTORIALS: [f64; 11] = [
    1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0, 3628800.0,
];

/// `cosh √δ` (or `cos √-δ`).
pub fn even_part(delta: f64) -> f64 {
    if delta.abs() < SERIES_OMEGA * SERIES_OMEGA {
        (0..5)
            .rev()
            .fold(0.0, |acc, k| acc * delta + 1.0 / FACTORIALS[2 * k])
    } else if delta > 0.0 {
        delta.sqrt().cosh()
    } else {
        (-delta).sqrt().cos()
    }
}

/// `sinh √δ / √δ` (or `sin √-δ / √-δ`).
pub fn odd_part(delta: f64) -> f64 {
    if delta.abs() < SERIES_OMEGA * SERIES_OMEGA {
        (0..5)
            .rev()
            .fold(0.0, |acc, k| acc * delta + 1.0 / FACTORIALS[2 * k + 1])
    } else if delta > 0.0 {
        let w = delta.sqrt();
        w.sinh() / w
    } else {
        let w = (-delta).sqrt();
        w.sin() / w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceClass {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Boundary,
    Nonpositive,
}

impl TraceClass {
    pub fn classify(trace: f64, epsilon: f64) -> Self {
        if (trace - 2.0).abs() <= epsilon {
            TraceClass::Parabolic
        } else if (trace + 2.0).abs() <= epsilon {
            TraceClass::Boundary
        } else if trace > 2.0 {
            TraceClass::Hyperbolic
        } else if trace < -2.0 {
            TraceClass::Nonpositive
        } else {
            TraceClass::Elliptic
        }
    }

    pub fn of(g: &Mat2<f64>) -> Self {
        Self::classify(g.trace(), TRACE_EPSILON)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// A traceless direction `X` with its rotation/boost rate `ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogDirection {
    pub x: Mat2<f64>,
    pub omega: f64,
    pub branch: Branch,
}

impl LogDirection {
    pub fn new(x: Mat2<f64>) -> Self {
        let delta = discriminant(&x);
        let (omega, branch) = if delta > 0.0 {
            (delta.sqrt(), Branch::Hyperbolic)
        } else if delta < 0.0 {
            ((-delta).sqrt(), Branch::Elliptic)
        } else {
            (0.0, Branch::Parabolic)
        };
        Self { x, omega, branch }
    }
}

/// `a² + bc` for traceless `X`, i.e. `-det X`.
pub fn discriminant(x: &Mat2<f64>) -> f64 {
    let a = 0.5 * (x.x - x.w);
    a * a + x.y * x.z
}

pub fn exp_sl2(x: &Mat2<f64>) -> Mat2<f64> {
    debug_assert!(
        x.trace().abs() <= 1e-9 * (1.0 + x.frobenius()),
        "exp_sl2 expects a traceless matrix"
    );
    let delta = discriminant(x);
    let c = even_part(delta);
    let s = odd_part(delta);
    Mat2::new(c + s * x.x, s * x.y, s * x.z, c + s * x.w)
}

/// Principal logarithm for `tr g >= 2`: `X = (ω / sinh ω)(g - cosh ω · I)`
/// with `cosh ω = tr g / 2`; at `tr g = 2` it is `g - I`.
pub fn log_sl2(g: &Mat2<f64>) -> Result<LogDirection> {
    let tr = g.trace();
    let half = 0.5 * tr;
    match TraceClass::of(g) {
        TraceClass::Parabolic => {
            let x = Mat2::new(g.x - half, g.y, g.z, g.w - half);
            return Ok(LogDirection {
                x,
                omega: 0.0,
                branch: Branch::Parabolic,
            });
        }
        TraceClass::Hyperbolic => {}
        TraceClass::Elliptic => {
            return Err(Error::UnsupportedBranch {
                trace: tr,
                case: "elliptic, multivalued",
            })
        }
        TraceClass::Boundary => {
            return Err(Error::UnsupportedBranch {
                trace: tr,
                case: "tr = -2, negate first",
            })
        }
        TraceClass::Nonpositive => {
            return Err(Error::UnsupportedBranch {
                trace: tr,
                case: "tr < -2, negate first",
            })
        }
    }
    let omega = half.acosh();
    let coef = 1.0 / odd_part(omega * omega);
    let x = Mat2::new(
        coef * (g.x - half),
        coef * g.y,
        coef * g.z,
        coef * (g.w - half),
    );
    Ok(LogDirection {
        x,
        omega,
        branch: Branch::Hyperbolic,
    })
}

/// `ω` with `cosh ω = tr/2`, zero on the parabolic boundary.
pub fn omega_of_trace(trace: f64) -> f64 {
    if trace <= 2.0 {
        0.0
    } else {
        (0.5 * trace).acosh()
    }
}

/// `λ = sinh(tω) / sinh(ω)`, with the `ω → 0` limit `λ = t`.
pub fn modified_time(t: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        t
    } else if omega < SERIES_OMEGA {
        let d = omega * omega;
        t * odd_part(t * t * d) / odd_part(d)
    } else if omega > 20.0 {
        // sinh(tω)/sinh(ω) = e^{(t-1)ω} (1 - e^{-2tω}) / (1 - e^{-2ω})
        ((t - 1.0) * omega).exp() * (-(-2.0 * t * omega).exp_m1()) / (-(-2.0 * omega).exp_m1())
    } else {
        (t * omega).sinh() / omega.sinh()
    }
}

/// Inverse of [`modified_time`] in `t`.
pub fn time_from_lambda(lambda: f64, omega: f64) -> f64 {
    if omega == 0.0 || lambda == 0.0 {
        return lambda;
    }
    if omega > 700.0 {
        // asinh(y) ≈ ln(2y) once y = λ sinh ω is astronomically large
        let ln_y = lambda.ln() + omega + (-(-2.0 * omega).exp_m1()).ln() - std::f64::consts::LN_2;
        return (std::f64::consts::LN_2 + ln_y) / omega;
    }
    (lambda * omega.sinh()).asinh() / omega
}

/// `a(λ) = (1 + (tr²/4 - 1) λ²)^{1/2}`.
pub fn a_of_lambda(lambda: f64, trace: f64) -> f64 {
    (1.0 + (0.25 * trace * trace - 1.0) * lambda * lambda).sqrt()
}

/// `g^t` for `tr g >= 2`:
/// `(cosh tω - λ cosh ω)·I + λ·g` with `λ = sinh tω / sinh ω`.
pub fn power_t(g: &Mat2<f64>, t: f64) -> Result<Mat2<f64>> {
    let tr = g.trace();
    if tr < 2.0 - TRACE_EPSILON {
        return Err(Error::UnsupportedBranch {
            trace: tr,
            case: "power_t needs tr >= 2",
        });
    }
    let omega = omega_of_trace(tr);
    let lambda = modified_time(t, omega);
    let c = (t * omega).cosh() - lambda * 0.5 * tr;
    Ok(Mat2::new(
        c + lambda * g.x,
        lambda * g.y,
        lambda * g.z,
        c + lambda * g.w,
    ))
}

/// The modified time of a curve point together with `a(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModifiedTime {
    pub lambda: f64,
    pub a_lambda: f64,
    pub trace: f64,
}

impl ModifiedTime {
    pub fn at(t: f64, trace: f64) -> Self {
        let lambda = modified_time(t, omega_of_trace(trace));
        Self {
            lambda,
            a_lambda: a_of_lambda(lambda, trace),
            trace,
        }
    }

    pub fn from_lambda(lambda: f64, trace: f64) -> Self {
        Self {
            lambda,
            a_lambda: a_of_lambda(lambda, trace),
            trace,
        }
    }

    /// `a(λ)² - (tr²/4 - 1) λ² - 1`, zero up to rounding.
    pub fn invariant_residual(&self) -> f64 {
        self.a_lambda * self.a_lambda
            - (0.25 * self.trace * self.trace - 1.0) * self.lambda * self.lambda
            - 1.0
    }
}

/// Curve point from a precomputed product `gγ` and its trace:
/// `[a(λ) - tr·λ/2]·I + λ·gγ`.
pub fn curve_point_from_product(g_gamma: &Mat2<f64>, trace: f64, t: f64) -> Mat2<f64> {
    let mt = ModifiedTime::at(t, trace);
    let c = mt.a_lambda - 0.5 * trace * mt.lambda;
    let l = mt.lambda;
    Mat2::new(
        c + l * g_gamma.x,
        l * g_gamma.y,
        l * g_gamma.z,
        c + l * g_gamma.w,
    )
}

/// `(gγ)^t` for rational `g` and integral `γ`, with the trace taken exactly.
pub fn curve_point(g: &Mat2<BigRational>, gamma: &Mat2<BigInt>, t: f64) -> Result<Mat2<f64>> {
    let product = g.mul(&gamma.to_rational());
    let trace = product.trace();
    let two = BigRational::from_i64(2).expect("small integer");
    if trace < two {
        return Err(Error::UnsupportedBranch {
            trace: to_f64(&trace),
            case: "curve needs tr(gγ) >= 2",
        });
    }
    Ok(curve_point_from_product(
        &product.to_f64(),
        to_f64(&trace),
        t,
    ))
}

/// Replaces `g` by `-g` when `tr g <= -2`; `-I` lies in every lattice used
/// here, so the coset is unchanged.
pub fn normalize_sign(g: &Mat2<f64>) -> (Mat2<f64>, bool) {
    if g.trace() <= -2.0 + TRACE_EPSILON {
        (g.neg(), true)
    } else {
        (g.clone(), false)
    }
}

/// A one-parameter connecting curve `t ↦ exp(tX)`, `t ∈ [0, 1]`, ending at
/// `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub target: Mat2<f64>,
    pub direction: LogDirection,
    pub negated: bool,
}

impl Curve {
    pub fn new(target: &Mat2<f64>) -> Result<Self> {
        let (target, negated) = normalize_sign(target);
        let direction = log_sl2(&target)?;
        Ok(Self {
            target,
            direction,
            negated,
        })
    }

    pub fn point(&self, t: f64) -> Mat2<f64> {
        exp_sl2(&self.direction.x.scale(&t))
    }

    pub fn sample(&self, density: usize) -> Vec<(f64, Mat2<f64>)> {
        sample_times(density)
            .into_iter()
            .map(|t| (t, self.point(t)))
            .collect()
    }
}

/// `density` uniform times `k / (density - 1)` covering `[0, 1]`.
pub fn sample_times(density: usize) -> Vec<f64> {
    match density {
        0 => Vec::new(),
        1 => vec![0.5],
        n => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::int;
    use std::f64::consts::E;

    fn close(a: &Mat2<f64>, b: &Mat2<f64>, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(exp_sl2(&Mat2::zero()), Mat2::identity());
    }

    #[test]
    fn exp_of_diagonal() {
        let g = exp_sl2(&Mat2::diag(1.0, -1.0));
        assert!(close(&g, &Mat2::diag(E, 1.0 / E), 1e-15));
    }

    #[test]
    fn exp_of_nilpotent_is_affine() {
        let n = Mat2::new(0.0, 3.0, 0.0, 0.0);
        assert_eq!(exp_sl2(&n), Mat2::new(1.0, 3.0, 0.0, 1.0));
    }

    #[test]
    fn series_region_is_continuous() {
        for d in [1e-9f64, -1e-9, 9.9e-9, -9.9e-9, 1.01e-8, -1.01e-8] {
            let w = d.abs().sqrt();
            let (c, s) = if d > 0.0 {
                (w.cosh(), w.sinh() / w)
            } else {
                (w.cos(), w.sin() / w)
            };
            assert!((even_part(d) - c).abs() < 1e-15);
            assert!((odd_part(d) - s).abs() < 1e-15);
        }
    }

    #[test]
    fn log_of_diagonal_and_identity() {
        let l = log_sl2(&Mat2::diag(E, 1.0 / E)).unwrap();
        assert!(close(&l.x, &Mat2::diag(1.0, -1.0), 1e-14));
        assert!((l.omega - 1.0).abs() < 1e-14);
        let id = log_sl2(&Mat2::identity()).unwrap();
        assert_eq!(id.x, Mat2::zero());
        assert_eq!(id.branch, Branch::Parabolic);
    }

    #[test]
    fn log_rejects_elliptic_and_negative_traces() {
        let rot = Mat2::new(0.0, 1.0, -1.0, 0.0);
        match log_sl2(&rot) {
            Err(Error::UnsupportedBranch { case, .. }) => assert!(case.contains("elliptic")),
            other => panic!("{other:?}"),
        }
        assert!(log_sl2(&Mat2::diag(-2.0, -0.5)).is_err());
        assert!(log_sl2(&Mat2::diag(-1.0, -1.0)).is_err());
    }

    #[test]
    fn log_round_trip_on_integer_matrix() {
        let g = Mat2::new(2.0, 1.0, 1.0, 1.0);
        let l = log_sl2(&g).unwrap();
        assert!(l.x.trace().abs() < 1e-15);
        assert!(close(&exp_sl2(&l.x), &g, 1e-10));
    }

    #[test]
    fn power_endpoints_and_diagonal_half() {
        let g = Mat2::new(2.0, 1.0, 1.0, 1.0);
        assert!(close(&power_t(&g, 0.0).unwrap(), &Mat2::identity(), 1e-15));
        assert!(close(&power_t(&g, 1.0).unwrap(), &g, 1e-14));
        let d = Mat2::diag(E * E, 1.0 / (E * E));
        assert!(close(
            &power_t(&d, 0.5).unwrap(),
            &Mat2::diag(E, 1.0 / E),
            1e-14
        ));
        let u = Mat2::new(1.0, 4.0, 0.0, 1.0);
        assert!(close(
            &power_t(&u, 0.25).unwrap(),
            &Mat2::new(1.0, 1.0, 0.0, 1.0),
            1e-15
        ));
        assert!(power_t(&Mat2::new(0.0, 1.0, -1.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn modified_time_values() {
        assert_eq!(modified_time(0.0, 1.3), 0.0);
        assert!((modified_time(1.0, 1.3) - 1.0).abs() < 1e-15);
        assert_eq!(modified_time(0.37, 0.0), 0.37);
        // sinh(ω/2)/sinh ω = 1/(2 cosh(ω/2)) = 1/√(2(1 + cosh ω)) = 1/√5 at cosh ω = 3/2
        let omega = 1.5f64.acosh();
        assert!((modified_time(0.5, omega) - 1.0 / 5f64.sqrt()).abs() < 1e-9);
        // the large-ω form agrees with the direct one where both are finite
        for t in [0.1, 0.5, 0.9] {
            let direct = (t * 25.0f64).sinh() / 25.0f64.sinh();
            assert!((modified_time(t, 25.0) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn time_from_lambda_endpoints() {
        assert_eq!(time_from_lambda(0.0, 2.0), 0.0);
        assert!((time_from_lambda(1.0, 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(time_from_lambda(0.4, 0.0), 0.4);
    }

    #[test]
    fn a_of_lambda_values() {
        assert_eq!(a_of_lambda(0.0, 3.0), 1.0);
        assert!((a_of_lambda(1.0, 3.0) - 1.5).abs() < 1e-15);
        assert!((a_of_lambda(0.5, 3.0) - 21f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn curve_point_endpoints() {
        let g = Mat2::new(int(1), int(0), int(1), int(1));
        let gamma = Mat2::new(4, 1, -9, -2).to_bigint();
        let prod = g.mul(&gamma.to_rational()).to_f64();
        assert!(close(&curve_point(&g, &gamma, 1.0).unwrap(), &prod, 1e-13));
        assert!(close(
            &curve_point(&g, &gamma, 0.0).unwrap(),
            &Mat2::identity(),
            1e-13
        ));
        let low = Mat2::new(1, 0, 0, 1).to_bigint();
        let neg = Mat2::new(int(-1), int(0), int(0), int(-1));
        assert!(curve_point(&neg, &low, 0.5).is_err());
    }

    #[test]
    fn curve_negates_nonpositive_targets() {
        let g = Mat2::new(-2.0, -1.0, -1.0, -1.0);
        let c = Curve::new(&g).unwrap();
        assert!(c.negated);
        assert!(close(&c.point(1.0), &g.neg(), 1e-12));
        assert!(close(&c.point(0.0), &Mat2::identity(), 0.0));
    }

    #[test]
    fn uniform_samples_cover_interval() {
        let s = sample_times(5);
        assert_eq!(s, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(sample_times(0).is_empty());
    }
}
