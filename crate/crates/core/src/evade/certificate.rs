//! Machine-checkable evidence that one connecting curve avoids a candidate
//! blocking set, and its independent replay.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::rational::{parse_exact, BigRational};
use crate::sl2::Mat2;

use super::refute::{
    scan_member, BlockingCandidate, CosetMetric, MemberCurve, PointClearance, CLEARANCE_CAP,
};

pub const CERTIFICATE_VERSION: u32 = 1;

/// Stored clearances must be reproduced to this accuracy.
pub const REPLAY_TOLERANCE: f64 = 1e-12;

/// Curve endpoints must lie this close to the start and target cosets.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Sl2,
    Quaternion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub a: i64,
    pub b: i64,
}

/// Exact entries as `"num/den"` strings, row-major for matrices and in
/// `1, i, j, k` order for quaternions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub input: Vec<String>,
    pub representative: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyParams {
    Sl2 {
        a: String,
        b: String,
        z: String,
    },
    Quaternion {
        x: String,
        y: String,
        gamma1: Vec<String>,
        pell_n: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberRef {
    pub index: usize,
    pub n: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: Option<String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub input: Vec<[f64; 4]>,
    pub canonical: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attestations {
    /// `det γ` (or the reduced norm of `γ`), exact.
    pub gamma_norm: String,
    /// `tr(gγ)` recomputed from the exact product.
    pub trace: String,
    /// The trace predicted by the family formula.
    pub family_trace: String,
    pub start_residual: f64,
    pub end_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub density: usize,
    pub epsilon: f64,
    pub clearance_cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvasionCertificate {
    pub version: u32,
    pub kind: CertificateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraParams>,
    pub target: TargetRecord,
    pub family_params: FamilyParams,
    pub member: MemberRef,
    pub gamma: Vec<String>,
    pub t: ExactValue,
    pub lambda: ExactValue,
    pub a_lambda: f64,
    pub omega: f64,
    pub candidates: CandidateRecord,
    pub clearances: Vec<PointClearance>,
    pub attestations: Attestations,
    pub sampling: Sampling,
}

impl EvasionCertificate {
    /// Pretty JSON with a trailing newline; field order is fixed by the type.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: Self =
            serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))?;
        if cert.version != CERTIFICATE_VERSION {
            return Err(Error::Certificate(format!(
                "unsupported version {}",
                cert.version
            )));
        }
        Ok(cert)
    }

    pub fn min_clearance(&self) -> f64 {
        self.clearances
            .iter()
            .map(|c| c.min_clearance)
            .fold(CLEARANCE_CAP, f64::min)
    }
}

pub fn flat(m: &Mat2<f64>) -> [f64; 4] {
    m.to_flat()
}

pub fn unflat(v: &[f64; 4]) -> Mat2<f64> {
    Mat2::from_flat(v)
}

pub(crate) fn parse_entries(v: &[String], n: usize, what: &str) -> Result<Vec<BigRational>> {
    if v.len() != n {
        return Err(Error::Certificate(format!(
            "{what} needs {n} entries, found {}",
            v.len()
        )));
    }
    v.iter()
        .map(|s| parse_exact(s).map_err(|e| Error::Certificate(format!("{what}: {e}"))))
        .collect()
}

pub(crate) fn parse_matrix(v: &[String], what: &str) -> Result<Mat2<BigRational>> {
    Ok(Mat2::from_flat(&parse_entries(v, 4, what)?))
}

/// Outcome of re-deriving a certificate from its stored inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    /// Largest difference between stored and recomputed clearances.
    pub clearance_drift: f64,
    /// Largest entry difference between stored and recomputed canonical points.
    pub canonical_drift: f64,
    pub min_clearance: f64,
    pub probe_clearance: f64,
    pub start_residual: f64,
    pub end_residual: f64,
    /// Every cell between samples was certified clear.
    pub certified: bool,
    pub attestations_ok: bool,
    pub passed: bool,
}

/// The part of a replay shared by all certificate kinds: re-canonicalize the
/// candidates, re-sample the curve and re-check the probe and endpoints.
pub(crate) fn replay_common(
    cert: &EvasionCertificate,
    metric: &dyn CosetMetric,
    curve: &MemberCurve,
    target: &Mat2<f64>,
    attestations_ok: bool,
) -> Result<ReplayReport> {
    let eps = cert.sampling.epsilon;
    let points: Vec<Mat2<f64>> = cert.candidates.input.iter().map(unflat).collect();
    let candidate = BlockingCandidate::new(points, eps, metric, &Mat2::identity(), target)?;
    if candidate.canonical.len() != cert.candidates.canonical.len()
        || cert.clearances.len() != candidate.len()
    {
        return Err(Error::Certificate(
            "candidate and clearance counts disagree".into(),
        ));
    }
    let canonical_drift = candidate
        .canonical
        .iter()
        .zip(&cert.candidates.canonical)
        .map(|(a, b)| a.max_abs_diff(&unflat(b)))
        .fold(0.0, f64::max);
    let scan = scan_member(curve, &candidate, metric, cert.sampling.density)?;
    let mut clearance_drift: f64 = 0.0;
    for (stored, fresh) in cert.clearances.iter().zip(&scan.clearances) {
        if stored.point != fresh.point
            || stored.at_t != fresh.at_t
            || stored.certified != fresh.certified
        {
            clearance_drift = f64::INFINITY;
        }
        clearance_drift = clearance_drift.max((stored.min_clearance - fresh.min_clearance).abs());
    }
    let inverses: Vec<Mat2<f64>> = candidate.canonical.iter().map(Mat2::inverse).collect();
    let at_probe = curve.point(cert.t.value);
    let probe_clearance = inverses
        .iter()
        .map(|b| metric.clearance(b, &at_probe, CLEARANCE_CAP))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(CLEARANCE_CAP, f64::min);
    let start_residual = metric.clearance(&Mat2::identity(), &curve.point(0.0), CLEARANCE_CAP)?;
    let end_residual = metric.clearance(&target.inverse(), &curve.point(1.0), CLEARANCE_CAP)?;
    let min_clearance = scan.worst();
    let certified = scan.clearances.iter().all(|c| c.certified);
    let passed = attestations_ok
        && certified
        && clearance_drift <= REPLAY_TOLERANCE
        && canonical_drift <= REPLAY_TOLERANCE
        && min_clearance > eps
        && probe_clearance > eps
        && start_residual <= RESIDUAL_TOLERANCE
        && end_residual <= RESIDUAL_TOLERANCE
        && (cert.attestations.start_residual - start_residual).abs() <= REPLAY_TOLERANCE
        && (cert.attestations.end_residual - end_residual).abs() <= REPLAY_TOLERANCE;
    Ok(ReplayReport {
        clearance_drift,
        canonical_drift,
        min_clearance,
        probe_clearance,
        start_residual,
        end_residual,
        certified,
        attestations_ok,
        passed,
    })
}
