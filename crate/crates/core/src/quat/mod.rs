//! Quaternion algebras `H^{a,b}`, the isomorphism `φ` onto `SL(2, R)`, the
//! Pell machinery behind quaternionic evasion families, and the refuter for
//! the cocompact quotients `SL(2, R)/φ(SL(1, H^{a,b}_Z))`.

mod algebra;
mod arith;
mod family;
mod metric;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::evade::{
    exact_strings, parse_entries, replay_common, search_family, AlgebraParams, Attestations,
    BlockingCandidate, CandidateRecord, CertificateKind, CosetMetric, EvasionCertificate,
    ExactValue, FamilyParams, MemberCurve, MemberRef, RefuteSettings, ReplayReport, Sampling,
    TargetRecord, CERTIFICATE_VERSION, CLEARANCE_CAP,
};
use crate::numeric::rational::{from_bigint, to_exact_string, to_f64, BigRational};
use crate::sl2::{a_of_lambda, Mat2};

pub use algebra::{
    curve_point_from_quat, curve_point_quat, dphi1, exp_quat, log_quat, phi_f64, phi_inverse_f64,
    phi_iso, power_t_quat, QuatAlgebra, QuatScalar, Quaternion, TangentVec,
};
pub use arith::{
    hilbert_symbol, is_division_algebra, pell_family, pell_fundamental, search_norm_form,
    DivisionVerdict, PellSolution, MAX_PELL_COEFFICIENT, MAX_PELL_PERIOD,
};
pub use family::{
    build_b_quat, check_family_base, det_b_quat, det_b_quat_direct, det_b_quat_leading,
    find_gamma1, fixed_components, gen_family_quat, verify_family, QuatFamily, QuatMember,
    GAMMA1_SEARCH_BOUND, MAX_QUAT_FAMILY,
};
pub use metric::{QuatMetric, GENERATOR_BOUND, MAX_BOX_POINTS};

/// Search bound for split witnesses when certifying a division algebra.
pub const DIVISION_SEARCH_BOUND: u64 = 1000;

/// Members with `Re(gγ)` above this are not evaluated in floating point.
pub const MAX_MEMBER_RE: f64 = 1e8;

/// Agreement required between the quaternionic and matrix curve formulas.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-9;

fn require_division(alg: QuatAlgebra) -> Result<()> {
    let verdict = is_division_algebra(alg.a as u64, alg.b as u64, DIVISION_SEARCH_BOUND)?;
    if !verdict.is_division() {
        return Err(Error::NotDivisionAlgebra {
            a: alg.a,
            b: alg.b,
            verdict: verdict.to_string(),
        });
    }
    Ok(())
}

/// Maps norm-one quaternions to `SL(2, R)` and validates them as a
/// blocking candidate for the target `g`.
pub fn quat_candidate(
    points: &[Quaternion<f64>],
    epsilon: f64,
    metric: &QuatMetric,
    g: &Quaternion<BigRational>,
) -> Result<BlockingCandidate> {
    let mut images = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        if p.alg != metric.alg() {
            return Err(Error::InvalidCandidate {
                index,
                reason: "point lies in a different algebra".into(),
            });
        }
        if (p.nred() - 1.0).abs() > 1e-9 * (1.0 + p.x * p.x) {
            return Err(Error::InvalidCandidate {
                index,
                reason: format!("reduced norm {} is not 1", p.nred()),
            });
        }
        images.push(phi_f64(p));
    }
    BlockingCandidate::new(
        images,
        epsilon,
        metric,
        &Mat2::identity(),
        &phi_f64(&g.to_f64()),
    )
}

fn member_curve(m: &QuatMember) -> MemberCurve {
    let product = m.product.to_f64();
    MemberCurve {
        product: phi_f64(&product),
        trace: 2.0 * product.x,
    }
}

/// As [`crate::evade::refute_blocking`] for the target `g = x + yi` in a
/// division algebra. Candidate points are given by their `φ`-images.
pub fn refute_blocking_quat(
    g: &Quaternion<BigRational>,
    candidate: &BlockingCandidate,
    settings: &RefuteSettings,
) -> Result<EvasionCertificate> {
    check_family_base(g)?;
    let alg = g.alg;
    require_division(alg)?;
    let metric = QuatMetric::new(alg);
    let gamma1 = find_gamma1(alg, GAMMA1_SEARCH_BOUND)?;
    let family = gen_family_quat(g, &gamma1, settings.budget)?;
    let usable = family
        .members
        .iter()
        .take_while(|m| to_f64(m.re()) <= MAX_MEMBER_RE)
        .count();
    let hit = search_family(
        |k| Ok(member_curve(family.member(k)?)),
        candidate,
        &metric,
        settings.density,
        usable,
    )?;
    let m = family.member(hit.member)?;
    let probe = hit.probe.evaluate(hit.curve.omega());
    let target = phi_f64(&g.to_f64());
    let start_residual =
        metric.clearance(&Mat2::identity(), &hit.curve.point(0.0), CLEARANCE_CAP)?;
    let end_residual = metric.clearance(&target.inverse(), &hit.curve.point(1.0), CLEARANCE_CAP)?;
    let a = from_bigint(&BigInt::from(alg.a));
    let predicted = &g.x * from_bigint(&m.gamma.x) + a * &g.y * from_bigint(&m.gamma.y);
    let coords = |q: &Quaternion<BigInt>| exact_strings(q.to_rational().coords());
    Ok(EvasionCertificate {
        version: CERTIFICATE_VERSION,
        kind: CertificateKind::Quaternion,
        algebra: Some(AlgebraParams { a: alg.a, b: alg.b }),
        target: TargetRecord {
            input: exact_strings(g.coords()),
            representative: exact_strings(g.coords()),
        },
        family_params: FamilyParams::Quaternion {
            x: to_exact_string(&g.x),
            y: to_exact_string(&g.y),
            gamma1: coords(&gamma1),
            pell_n: family.pell_n.to_string(),
        },
        member: MemberRef {
            index: hit.member,
            n: m.gamma.x.to_string(),
        },
        gamma: coords(&m.gamma),
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
            input: candidate.points.iter().map(Mat2::to_flat).collect(),
            canonical: candidate.canonical.iter().map(Mat2::to_flat).collect(),
        },
        clearances: hit.scan.clearances,
        attestations: Attestations {
            gamma_norm: to_exact_string(&from_bigint(&m.gamma.nred())),
            trace: to_exact_string(m.re()),
            family_trace: to_exact_string(&predicted),
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

fn parse_quat(v: &[String], alg: QuatAlgebra, what: &str) -> Result<Quaternion<BigRational>> {
    let e = parse_entries(v, 4, what)?;
    Ok(Quaternion::new(
        alg,
        e[0].clone(),
        e[1].clone(),
        e[2].clone(),
        e[3].clone(),
    ))
}

fn integral(q: Quaternion<BigRational>, what: &str) -> Result<Quaternion<BigInt>> {
    q.to_integer()
        .ok_or_else(|| Error::Certificate(format!("{what} has non-integer coordinates")))
}

/// Replays a quaternionic certificate: the algebra verdict, the family
/// member, the exact attestations, then the sampled clearances. The curve is
/// evaluated through `φ` and cross-checked against the quaternionic formula
/// at the probe time.
pub(crate) fn replay_quat(cert: &EvasionCertificate) -> Result<ReplayReport> {
    let params = cert
        .algebra
        .ok_or_else(|| Error::Certificate("quaternion certificate without algebra".into()))?;
    let alg = QuatAlgebra::new(params.a, params.b)?;
    require_division(alg)?;
    let g = parse_quat(&cert.target.representative, alg, "target")?;
    let input = parse_quat(&cert.target.input, alg, "target input")?;
    check_family_base(&g)?;
    let gamma = integral(parse_quat(&cert.gamma, alg, "gamma")?, "gamma")?;
    let FamilyParams::Quaternion { gamma1, pell_n, .. } = &cert.family_params else {
        return Err(Error::Certificate(
            "family parameters do not describe a quaternionic family".into(),
        ));
    };
    let gamma1 = integral(parse_quat(gamma1, alg, "gamma1")?, "gamma1")?;
    let family = gen_family_quat(&g, &gamma1, cert.member.index)?;
    let member = family.member(cert.member.index)?;
    let product = g.mul(&gamma.to_rational())?;
    let a = from_bigint(&BigInt::from(alg.a));
    let predicted = &g.x * from_bigint(&gamma.x) + a * &g.y * from_bigint(&gamma.y);
    let metric = QuatMetric::new(alg);
    let curve = member_curve(member);
    let probe_quat = curve_point_quat(&g, &gamma, cert.t.value)?;
    let cross = phi_f64(&probe_quat).max_abs_diff(&curve.point(cert.t.value));
    let attestations_ok = input == g
        && member.gamma == gamma
        && gamma1 == find_gamma1(alg, GAMMA1_SEARCH_BOUND)?
        && family.pell_n.to_string() == *pell_n
        && gamma.x.to_string() == cert.member.n
        && gamma.nred().is_one()
        && to_exact_string(&from_bigint(&gamma.nred())) == cert.attestations.gamma_norm
        && to_exact_string(&product.x) == cert.attestations.trace
        && to_exact_string(&predicted) == cert.attestations.family_trace
        && predicted == product.x
        && product.x > BigRational::one()
        && cross <= CROSS_CHECK_TOLERANCE * (1.0 + to_f64(&product.x));
    let dyn_metric: &dyn CosetMetric = &metric;
    replay_common(
        cert,
        dyn_metric,
        &curve,
        &phi_f64(&g.to_f64()),
        attestations_ok,
    )
}
