//! Search for a connecting curve that stays clear of a finite candidate
//! blocking set.
//!
//! Each family member `γ` gives the curve `t ↦ (gγ)^t` from the identity
//! coset to `gΓ`. A member is accepted when the curve, sampled uniformly,
//! keeps every candidate point at distance above `ε`, and a probe time
//! (`t = 1/2` first, then the λ-grid `m/34`) is clear as well. Members are
//! tried in family order; each curve's samples are evaluated in parallel and
//! reduced in index order, so the outcome is deterministic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{canonical_rep, distance_to_identity_capped};
use crate::sl2::{
    curve_point_from_product, log_sl2, modified_time, omega_of_trace, sample_times,
    time_from_lambda, Mat2,
};

pub const DEFAULT_BLOCKING_EPSILON: f64 = 1e-3;
pub const DEFAULT_BUDGET: usize = 100;
pub const MAX_BLOCKING_POINTS: usize = 64;

/// Clearances are reported as `min(distance, CLEARANCE_CAP)`; anything at
/// the cap is comfortably clear of any admissible `ε`.
pub const CLEARANCE_CAP: f64 = 1.0;

/// Denominator of the λ-grid probed after the midpoint.
pub const LAMBDA_GRID: u32 = 34;

/// Bisection depth allowed when certifying a cell between two samples.
pub const MAX_REFINE_DEPTH: u32 = 40;

/// Distances between points of `G/Λ` for the lattice `Λ` at hand.
pub trait CosetMetric: Sync {
    /// A distinguished representative of `bΛ`.
    fn canonicalize(&self, b: &Mat2<f64>) -> Result<Mat2<f64>>;

    /// `min(min_{s ∈ Λ} ‖b⁻¹ c s - I‖_F, cap)`, given `b⁻¹`.
    fn clearance(&self, b_inv: &Mat2<f64>, c: &Mat2<f64>, cap: f64) -> Result<f64>;
}

/// The metric for `Λ = SL(2, Z)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModularMetric;

impl CosetMetric for ModularMetric {
    fn canonicalize(&self, b: &Mat2<f64>) -> Result<Mat2<f64>> {
        canonical_rep(b)
    }

    fn clearance(&self, b_inv: &Mat2<f64>, c: &Mat2<f64>, cap: f64) -> Result<f64> {
        distance_to_identity_capped(&b_inv.mul(c), cap)
    }
}

/// A validated finite set of points that is supposed to block every
/// connecting curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockingCandidate {
    pub points: Vec<Mat2<f64>>,
    pub canonical: Vec<Mat2<f64>>,
    pub epsilon: f64,
}

impl BlockingCandidate {
    /// Canonicalizes the points and rejects any that lies within `ε` of the
    /// start or target coset.
    pub fn new(
        points: Vec<Mat2<f64>>,
        epsilon: f64,
        metric: &dyn CosetMetric,
        start: &Mat2<f64>,
        target: &Mat2<f64>,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < CLEARANCE_CAP) {
            return Err(Error::Precondition(format!(
                "blocking epsilon must lie in (0, {CLEARANCE_CAP})"
            )));
        }
        if points.len() > MAX_BLOCKING_POINTS {
            return Err(Error::Precondition(format!(
                "{} candidate points exceed the limit of {MAX_BLOCKING_POINTS}",
                points.len()
            )));
        }
        let mut canonical = Vec::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            let invalid = |reason: String| Error::InvalidCandidate { index, reason };
            let c = metric.canonicalize(p).map_err(|e| invalid(e.to_string()))?;
            let c_inv = c.inverse();
            if metric.clearance(&c_inv, start, CLEARANCE_CAP)? <= epsilon {
                return Err(invalid("coincides with the start coset".into()));
            }
            if metric.clearance(&c_inv, target, CLEARANCE_CAP)? <= epsilon {
                return Err(invalid("coincides with the target coset".into()));
            }
            canonical.push(c);
        }
        Ok(Self {
            points,
            canonical,
            epsilon,
        })
    }

    pub fn for_sl2(points: Vec<Mat2<f64>>, epsilon: f64, target: &Mat2<f64>) -> Result<Self> {
        Self::new(points, epsilon, &ModularMetric, &Mat2::identity(), target)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn inverses(&self) -> Vec<Mat2<f64>> {
        self.canonical.iter().map(Mat2::inverse).collect()
    }
}

/// The curve `t ↦ (gγ)^t` of one family member, given `gγ` in `SL(2, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberCurve {
    pub product: Mat2<f64>,
    pub trace: f64,
}

impl MemberCurve {
    pub fn point(&self, t: f64) -> Mat2<f64> {
        curve_point_from_product(&self.product, self.trace, t)
    }

    pub fn omega(&self) -> f64 {
        omega_of_trace(self.trace)
    }

    /// `X` with `point(t) = exp(tX)`.
    pub fn generator(&self) -> Result<Mat2<f64>> {
        Ok(log_sl2(&self.product)?.x)
    }
}

/// Where a member curve is probed after it has been found clear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "m")]
pub enum ProbeTime {
    Midpoint,
    /// `λ = m / LAMBDA_GRID`.
    LambdaGrid(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeValue {
    pub t: f64,
    pub lambda: f64,
    pub t_exact: Option<String>,
    pub lambda_exact: Option<String>,
}

impl ProbeTime {
    pub fn order() -> impl Iterator<Item = ProbeTime> {
        std::iter::once(ProbeTime::Midpoint).chain((1..LAMBDA_GRID).map(ProbeTime::LambdaGrid))
    }

    pub fn evaluate(self, omega: f64) -> ProbeValue {
        match self {
            ProbeTime::Midpoint => ProbeValue {
                t: 0.5,
                lambda: modified_time(0.5, omega),
                t_exact: Some("1/2".into()),
                lambda_exact: None,
            },
            ProbeTime::LambdaGrid(m) => {
                let lambda = f64::from(m) / f64::from(LAMBDA_GRID);
                let r = crate::numeric::rational::rat(i64::from(m), i64::from(LAMBDA_GRID));
                ProbeValue {
                    t: time_from_lambda(lambda, omega),
                    lambda,
                    t_exact: None,
                    lambda_exact: Some(crate::numeric::rational::to_exact_string(&r)),
                }
            }
        }
    }
}

/// Least evaluated clearance from one candidate point.
///
/// `certified` means every cell between samples was shown to stay above `ε`
/// (see [`scan_member`]), so the whole curve, not just its samples, avoids
/// the `ε`-ball around the point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointClearance {
    pub point: usize,
    pub min_clearance: f64,
    pub at_t: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberScan {
    pub clearances: Vec<PointClearance>,
    /// First clear probe, with the clearances measured there.
    pub probe: Option<(ProbeTime, Vec<f64>)>,
}

impl MemberScan {
    /// Smallest clearance over all points (`CLEARANCE_CAP` when there are none).
    pub fn worst(&self) -> f64 {
        self.clearances
            .iter()
            .map(|c| c.min_clearance)
            .fold(CLEARANCE_CAP, f64::min)
    }

    pub fn is_clear(&self, epsilon: f64) -> bool {
        self.probe.is_some()
            && self
                .clearances
                .iter()
                .all(|c| c.certified && c.min_clearance > epsilon)
    }
}

fn clearances_at(
    metric: &dyn CosetMetric,
    inverses: &[Mat2<f64>],
    point: &Mat2<f64>,
    cap: f64,
) -> Result<Vec<f64>> {
    inverses
        .iter()
        .map(|b| metric.clearance(b, point, cap))
        .collect()
}

/// Largest clearance at the centre of a cell of radius `r` that is still
/// compatible with some point of the cell lying within `ε`.
///
/// Along the curve, `M(t) = b⁻¹c(t)γ` satisfies `M' = (b⁻¹Xb)M`, so
/// `f = ‖M - I‖_F` obeys `|f'| <= K(√2 + f)` with `K = ‖b⁻¹Xb‖_F`, and
/// `√2 + f` changes by at most a factor `e^{Kr}` across the cell.
fn uncertified_below(epsilon: f64, k: f64, r: f64) -> f64 {
    (epsilon + SQRT_2) * (k * r).exp() - SQRT_2
}

const SQRT_2: f64 = std::f64::consts::SQRT_2;

struct CellCheck<'a> {
    metric: &'a dyn CosetMetric,
    curve: &'a MemberCurve,
    b_inv: &'a Mat2<f64>,
    k: f64,
    epsilon: f64,
}

impl CellCheck<'_> {
    /// Certifies `[lo, hi]` given the clearance `d` at `t`; refined
    /// evaluations update `best`.
    fn certify(
        &self,
        lo: f64,
        hi: f64,
        t: f64,
        d: f64,
        depth: u32,
        best: &mut (f64, f64),
    ) -> Result<bool> {
        if d <= self.epsilon {
            return Ok(false);
        }
        let r = (t - lo).max(hi - t);
        if d > uncertified_below(self.epsilon, self.k, r) {
            return Ok(true);
        }
        if depth == MAX_REFINE_DEPTH {
            return Ok(false);
        }
        let halves = if t - lo >= hi - t {
            [(lo, t), (t, hi)]
        } else {
            [(t, hi), (lo, t)]
        };
        for (a, b) in halves {
            if b - a <= 0.0 {
                continue;
            }
            let m = 0.5 * (a + b);
            let dm = self
                .metric
                .clearance(self.b_inv, &self.curve.point(m), CLEARANCE_CAP)?;
            if dm < best.0 {
                *best = (dm, m);
            }
            if !self.certify(a, b, m, dm, depth + 1, best)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Samples one member curve against all candidate points, then certifies
/// the gaps between samples.
///
/// Each sample `tₖ` owns the cell `[tₖ - h/2, tₖ + h/2]`. A cell is accepted
/// outright when its sampled clearance exceeds the bound of
/// [`uncertified_below`]; otherwise it is bisected until every piece is
/// accepted, a clearance `<= ε` turns up, or [`MAX_REFINE_DEPTH`] is reached.
pub fn scan_member(
    curve: &MemberCurve,
    candidate: &BlockingCandidate,
    metric: &dyn CosetMetric,
    density: usize,
) -> Result<MemberScan> {
    let inverses = candidate.inverses();
    let times = sample_times(density);
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| clearances_at(metric, &inverses, &curve.point(t), CLEARANCE_CAP))
        .collect::<Result<_>>()?;
    let mut clearances: Vec<PointClearance> = (0..inverses.len())
        .map(|point| PointClearance {
            point,
            min_clearance: f64::INFINITY,
            at_t: 0.0,
            certified: false,
        })
        .collect();
    for (row, &t) in rows.iter().zip(&times) {
        for (pc, &d) in clearances.iter_mut().zip(row) {
            if d < pc.min_clearance {
                pc.min_clearance = d;
                pc.at_t = t;
            }
        }
    }
    let sampled_clear = clearances
        .iter()
        .all(|c| c.min_clearance > candidate.epsilon);
    if sampled_clear && !inverses.is_empty() {
        let x = curve.generator()?;
        let half = 0.5 / (times.len() - 1) as f64;
        let certified: Vec<(bool, (f64, f64))> = inverses
            .par_iter()
            .zip(&candidate.canonical)
            .enumerate()
            .map(|(j, (b_inv, b))| {
                let check = CellCheck {
                    metric,
                    curve,
                    b_inv,
                    k: b_inv.mul(&x).mul(b).frobenius(),
                    epsilon: candidate.epsilon,
                };
                let mut best = (f64::INFINITY, 0.0);
                for (row, &t) in rows.iter().zip(&times) {
                    let (lo, hi) = ((t - half).max(0.0), (t + half).min(1.0));
                    if !check.certify(lo, hi, t, row[j], 0, &mut best)? {
                        return Ok((false, best));
                    }
                }
                Ok((true, best))
            })
            .collect::<Result<_>>()?;
        for (pc, (ok, (d, t))) in clearances.iter_mut().zip(certified) {
            pc.certified = ok;
            if d < pc.min_clearance {
                pc.min_clearance = d;
                pc.at_t = t;
            }
        }
    }
    for pc in &mut clearances {
        pc.min_clearance = pc.min_clearance.min(CLEARANCE_CAP);
    }
    let mut scan = MemberScan {
        clearances,
        probe: None,
    };
    if !scan
        .clearances
        .iter()
        .all(|c| c.certified && c.min_clearance > candidate.epsilon)
    {
        return Ok(scan);
    }
    let omega = curve.omega();
    for probe in ProbeTime::order() {
        let value = probe.evaluate(omega);
        let at = clearances_at(metric, &inverses, &curve.point(value.t), CLEARANCE_CAP)?;
        if at.iter().all(|&d| d > candidate.epsilon) {
            scan.probe = Some((probe, at));
            break;
        }
    }
    Ok(scan)
}

/// Result of a successful family search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    pub member: usize,
    pub curve: MemberCurve,
    pub scan: MemberScan,
    pub probe: ProbeTime,
}

/// Tries members `1..=budget` in order and returns the first clear one.
pub fn search_family<F>(
    member_curve: F,
    candidate: &BlockingCandidate,
    metric: &dyn CosetMetric,
    density: usize,
    budget: usize,
) -> Result<SearchHit>
where
    F: Fn(usize) -> Result<MemberCurve>,
{
    if density < 2 {
        return Err(Error::Precondition(
            "sample density must be at least 2".into(),
        ));
    }
    let mut best: Option<(usize, f64)> = None;
    for member in 1..=budget {
        let curve = member_curve(member)?;
        let scan = scan_member(&curve, candidate, metric, density)?;
        if scan.is_clear(candidate.epsilon) {
            let probe = scan
                .probe
                .as_ref()
                .map(|p| p.0)
                .expect("clear scans carry a probe");
            return Ok(SearchHit {
                member,
                curve,
                scan,
                probe,
            });
        }
        let worst = scan.worst();
        if best.is_none_or(|(_, b)| worst > b) {
            best = Some((member, worst));
        }
    }
    Err(Error::BudgetExceeded {
        budget,
        best_clearance: best.map_or(0.0, |b| b.1),
        best_member: best.map(|b| b.0),
    })
}
