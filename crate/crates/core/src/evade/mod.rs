//! Evasion sequences in `SL(2, Z)` cosets and the machinery around them:
//! the `B(i, j)` matrices and their determinant, the norm-square
//! obstruction, a refuter for finite candidate blocking sets with
//! replayable certificates, and the block embedding into `SL(n)`.

mod bmatrix;
mod certificate;
mod embed;
mod family;
mod obstruction;
mod refute;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{check_unimodular, CosetRep};
use crate::numeric::rational::{from_bigint, to_exact_string, to_f64, BigRational};
use crate::sl2::{a_of_lambda, Mat2};

pub use bmatrix::{
    apply_b, build_b, det_b_closed, det_b_direct, det_b_formula, det_b_leading, det_b_polynomial,
};
pub use certificate::{
    flat, unflat, AlgebraParams, Attestations, CandidateRecord, CertificateKind,
    EvasionCertificate, ExactValue, FamilyParams, MemberRef, ReplayReport, Sampling, TargetRecord,
    CERTIFICATE_VERSION, REPLAY_TOLERANCE, RESIDUAL_TOLERANCE,
};
pub(crate) use certificate::{parse_entries, parse_matrix, replay_common};
pub use embed::embed_sln;
pub use family::{
    closed_forms_at, entry_closed_forms, family_member, family_params, first_index, gen_family,
    EvasionFamily, FamilyMember, MAX_FAMILY,
};
pub use obstruction::{norm_square_obstruction, obstruction_constant, ObstructionReport};
pub use refute::{
    scan_member, search_family, BlockingCandidate, CosetMetric, MemberCurve, MemberScan,
    ModularMetric, PointClearance, ProbeTime, ProbeValue, SearchHit, CLEARANCE_CAP,
    DEFAULT_BLOCKING_EPSILON, DEFAULT_BUDGET, LAMBDA_GRID, MAX_BLOCKING_POINTS,
};

/// Sampling and budget for a refutation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefuteSettings {
    pub density: usize,
    pub budget: usize,
}

impl Default for RefuteSettings {
    fn default() -> Self {
        Self {
            density: crate::sl2::DEFAULT_SAMPLE_DENSITY,
            budget: DEFAULT_BUDGET,
        }
    }
}

pub(crate) fn exact_strings<'a>(v: impl IntoIterator<Item = &'a BigRational>) -> Vec<String> {
    v.into_iter().map(to_exact_string).collect()
}

fn int_strings<'a>(v: impl IntoIterator<Item = &'a BigInt>) -> Vec<String> {
    v.into_iter()
        .map(|x| to_exact_string(&from_bigint(x)))
        .collect()
}

fn member_curve(m: &FamilyMember) -> MemberCurve {
    MemberCurve {
        product: m.product.to_f64(),
        trace: to_f64(&m.trace),
    }
}

/// Looks for a family member whose curve avoids every candidate point.
///
/// Never concludes that the candidate blocks: running out of budget is
/// reported as [`Error::BudgetExceeded`] with the best clearance seen.
pub fn refute_blocking(
    target: &CosetRep,
    candidate: &BlockingCandidate,
    settings: &RefuteSettings,
) -> Result<EvasionCertificate> {
    refute_blocking_from(&target.g, target, candidate, settings)
}

/// As [`refute_blocking`], recording `input` as the user-supplied target.
pub fn refute_blocking_from(
    input: &Mat2<BigRational>,
    target: &CosetRep,
    candidate: &BlockingCandidate,
    settings: &RefuteSettings,
) -> Result<EvasionCertificate> {
    let (a, b, z) = family_params(target)?;
    let first_n = first_index(&b, &z);
    let member_at = |k: usize| family_member(target, k, &(&first_n + (k - 1)));
    let hit = search_family(
        |k| member_at(k).map(|m| member_curve(&m)),
        candidate,
        &ModularMetric,
        settings.density,
        settings.budget,
    )?;
    let m = member_at(hit.member)?;
    let probe = hit.probe.evaluate(hit.curve.omega());
    let metric = ModularMetric;
    let start_residual =
        metric.clearance(&Mat2::identity(), &hit.curve.point(0.0), CLEARANCE_CAP)?;
    let end_residual = metric.clearance(
        &target.to_f64().inverse(),
        &hit.curve.point(1.0),
        CLEARANCE_CAP,
    )?;
    Ok(EvasionCertificate {
        version: CERTIFICATE_VERSION,
        kind: CertificateKind::Sl2,
        algebra: None,
        target: TargetRecord {
            input: exact_strings(input.entries()),
            representative: exact_strings(target.g.entries()),
        },
        family_params: FamilyParams::Sl2 {
            a: to_exact_string(&from_bigint(&a)),
            b: to_exact_string(&from_bigint(&b)),
            z: to_exact_string(&z),
        },
        member: MemberRef {
            index: hit.member,
            n: m.n.to_string(),
        },
        gamma: int_strings(m.gamma.entries()),
        t: ExactValue {
            exact: probe.t_exact,
            value: probe.t,
        },
        lambda: ExactValue {
            exact: probe.lambda_exact,
            value: probe.lambda,
        },
        a_lambda: a_of_lambda(probe.lambda, hit.curve.trace),
        omega: hit.curve.omega(),
        candidates: CandidateRecord {
            input: candidate.points.iter().map(flat).collect(),
            canonical: candidate.canonical.iter().map(flat).collect(),
        },
        clearances: hit.scan.clearances,
        attestations: Attestations {
            gamma_norm: to_exact_string(&from_bigint(&m.gamma.det())),
            trace: to_exact_string(&m.product.trace()),
            family_trace: to_exact_string(&m.trace),
            start_residual,
            end_residual,
        },
        sampling: Sampling {
            density: settings.density,
            epsilon: candidate.epsilon,
            clearance_cap: CLEARANCE_CAP,
        },
    })
}

fn replay_sl2(cert: &EvasionCertificate) -> Result<ReplayReport> {
    let input = parse_matrix(&cert.target.input, "target input")?;
    let rep = parse_matrix(&cert.target.representative, "target representative")?;
    check_unimodular(&rep)?;
    let target = CosetRep::new(rep.clone())?;
    let gamma = parse_matrix(&cert.gamma, "gamma")?;
    let gamma_int = gamma
        .to_integer()
        .ok_or_else(|| Error::Certificate("gamma has non-integer entries".into()))?;
    let n: BigInt = cert
        .member
        .n
        .parse()
        .map_err(|_| Error::Certificate("member n is not an integer".into()))?;
    let expected = family_member(&target, cert.member.index, &n)?;
    let product = rep.mul(&gamma);
    let trace = product.trace();
    let one = BigRational::from_integer(BigInt::from(1));
    let attestations_ok = crate::lattice::same_coset_exact(&input, &rep)?
        && gamma_int == expected.gamma
        && gamma.det() == one
        && to_exact_string(&gamma.det()) == cert.attestations.gamma_norm
        && to_exact_string(&trace) == cert.attestations.trace
        && to_exact_string(&expected.trace) == cert.attestations.family_trace
        && trace == expected.trace;
    let curve = MemberCurve {
        product: product.to_f64(),
        trace: to_f64(&trace),
    };
    replay_common(
        cert,
        &ModularMetric,
        &curve,
        &target.to_f64(),
        attestations_ok,
    )
}

/// Re-derives every stored quantity of a certificate from its exact inputs.
pub fn replay_certificate(cert: &EvasionCertificate) -> Result<ReplayReport> {
    match cert.kind {
        CertificateKind::Sl2 => replay_sl2(cert),
        CertificateKind::Quaternion => crate::quat::replay_quat(cert),
    }
}
