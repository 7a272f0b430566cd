//! Distances in `SL(2, R)/φ(Γ)` for `Γ = SL(1, H^{a,b}_Z)`.
//!
//! A coset is first brought near the identity by greedy right
//! multiplication with short lattice elements. The clearance is then exact:
//! every integer quaternion `v` with `‖Mφ(v) - I‖ < cap` lies in an explicit
//! box, and all norm-one points of that box are checked.

use crate::error::{Error, Result};
use crate::evade::CosetMetric;
use crate::sl2::Mat2;

use super::algebra::{phi_f64, QuatAlgebra, Quaternion};

/// Coordinate bound of the short elements used for greedy reduction.
pub const GENERATOR_BOUND: i64 = 2;

/// Largest box enumerated by [`QuatMetric::clearance`].
pub const MAX_BOX_POINTS: f64 = 2e6;

const MAX_DESCENT_STEPS: usize = 10_000;

/// The coset metric for the unit group of the integral quaternions.
#[derive(Debug, Clone)]
pub struct QuatMetric {
    alg: QuatAlgebra,
    generators: Vec<Mat2<f64>>,
    /// Rows of the inverse of the linear map `v ↦ φ(v)` on `R⁴`.
    phi_inv: [[f64; 4]; 4],
}

impl QuatMetric {
    pub fn new(alg: QuatAlgebra) -> Self {
        let mut generators = Vec::new();
        let r = GENERATOR_BOUND;
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    for w in -r..=r {
                        let q = Quaternion::new(alg, x, y, z, w);
                        if nred_i128(&q) == 1 && (y, z, w) != (0, 0, 0) {
                            generators.push(phi_f64(&q.map(|&v| v as f64)));
                        }
                    }
                }
            }
        }
        let s = alg.sqrt_a();
        let b = alg.b as f64;
        let phi_inv = [
            [0.5, 0.0, 0.0, 0.5],
            [0.5 / s, 0.0, 0.0, -0.5 / s],
            [0.0, 0.5, 0.5 / b, 0.0],
            [0.0, 0.5 / s, -0.5 / (b * s), 0.0],
        ];
        Self {
            alg,
            generators,
            phi_inv,
        }
    }

    pub fn alg(&self) -> QuatAlgebra {
        self.alg
    }

    /// Number of short elements used for reduction.
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    fn descend(&self, m: &Mat2<f64>) -> Result<Mat2<f64>> {
        if !m.is_finite() || (m.det() - 1.0).abs() > 1e-8 * (1.0 + m.frobenius().powi(2)) {
            return Err(Error::NotUnimodular {
                det: m.det().to_string(),
            });
        }
        let mut cur = m.clone();
        let mut d = cur.dist_to_identity();
        for _ in 0..MAX_DESCENT_STEPS {
            let mut best: Option<(f64, Mat2<f64>)> = None;
            for gen in &self.generators {
                let c = cur.mul(gen);
                let dc = c.dist_to_identity();
                if dc < d - 1e-12 && best.as_ref().is_none_or(|(bd, _)| dc < *bd) {
                    best = Some((dc, c));
                }
            }
            match best {
                Some((dc, c)) => {
                    d = dc;
                    cur = c;
                }
                None => return Ok(cur),
            }
        }
        Err(Error::Consistency(
            "greedy coset reduction did not settle".into(),
        ))
    }

    /// `min(min_{γ ∈ Γ} ‖m φ(γ) - I‖_F, cap)`.
    pub fn distance_capped(&self, m: &Mat2<f64>, cap: f64) -> Result<f64> {
        let r = self.descend(m)?;
        let best = r.dist_to_identity().min(cap);
        // v = φ⁻¹(r⁻¹(I + Δ)) with ‖Δ‖_F < best
        let n = r.inverse();
        let k = [
            [n.x, 0.0, n.y, 0.0],
            [0.0, n.x, 0.0, n.y],
            [n.z, 0.0, n.w, 0.0],
            [0.0, n.z, 0.0, n.w],
        ];
        let mut lo = [0i64; 4];
        let mut hi = [0i64; 4];
        let mut count = 1.0;
        let centre = [n.x, n.y, n.z, n.w];
        for row in 0..4 {
            let l: Vec<f64> = (0..4)
                .map(|c| (0..4).map(|t| self.phi_inv[row][t] * k[t][c]).sum())
                .collect();
            let mid: f64 = (0..4).map(|t| self.phi_inv[row][t] * centre[t]).sum();
            let radius = best * l.iter().map(|v| v * v).sum::<f64>().sqrt() + 1e-9;
            lo[row] = (mid - radius).ceil() as i64;
            hi[row] = (mid + radius).floor() as i64;
            count *= (hi[row] - lo[row] + 1).max(0) as f64;
        }
        if count > MAX_BOX_POINTS {
            return Err(Error::Precondition(format!(
                "lattice box of {count:e} points is too large"
            )));
        }
        let mut d = best;
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    for w in lo[3]..=hi[3] {
                        let q = Quaternion::new(self.alg, x, y, z, w);
                        if nred_i128(&q) != 1 {
                            continue;
                        }
                        let dc = r.mul(&phi_f64(&q.map(|&v| v as f64))).dist_to_identity();
                        d = d.min(dc);
                    }
                }
            }
        }
        Ok(d)
    }
}

fn nred_i128(q: &Quaternion<i64>) -> i128 {
    let (a, b) = (i128::from(q.alg.a), i128::from(q.alg.b));
    let (x, y, z, w) = (
        i128::from(q.x),
        i128::from(q.y),
        i128::from(q.z),
        i128::from(q.w),
    );
    x * x - a * y * y - b * z * z + a * b * w * w
}

impl CosetMetric for QuatMetric {
    fn canonicalize(&self, b: &Mat2<f64>) -> Result<Mat2<f64>> {
        self.descend(b)
    }

    fn clearance(&self, b_inv: &Mat2<f64>, c: &Mat2<f64>, cap: f64) -> Result<f64> {
        self.distance_capped(&b_inv.mul(c), cap)
    }
}
