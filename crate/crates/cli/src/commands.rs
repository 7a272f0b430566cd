//! Analytic and arithmetic commands: `exp`, `log`, `curve`, `reduce`,
//! `pell`, `algebra`.

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use latblock::evade::CertificateKind;
use latblock::lattice::{check_unimodular, coset_reduce};
use latblock::numeric::rational::{int, parse_exact, to_exact_string, to_f64};
use latblock::parse::{
    format_matrix, format_matrix_f64, format_quaternion, format_quaternion_f64, parse_matrix,
    parse_quaternion,
};
use latblock::quat::{
    curve_point_quat, dphi1, exp_quat, is_division_algebra, log_quat, pell_family,
    pell_fundamental, phi_f64, DivisionVerdict, TangentVec, DIVISION_SEARCH_BOUND,
};
use latblock::sl2::{
    a_of_lambda, curve_point, exp_sl2, log_sl2, modified_time, omega_of_trace, power_t, Branch,
    LogDirection, Mat2, TraceClass,
};

use crate::config::RunConfig;
use crate::report::render;
use crate::{AlgebraFlags, Element, ElementArgs, Outcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpReport {
    pub kind: CertificateKind,
    pub input: String,
    pub result: String,
    /// `φ(result)` for quaternion input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
    pub branch: Branch,
    pub omega: f64,
    /// Determinant or reduced norm of the result.
    pub norm: f64,
}

pub fn exp(args: &ElementArgs, cfg: &RunConfig) -> Result<Outcome> {
    let report = match args.element()? {
        Element::Matrix(x) => {
            if x.trace() != int(0) {
                bail!(
                    "exp needs a traceless matrix, trace is {}",
                    to_exact_string(&x.trace())
                );
            }
            let xf = x.to_f64();
            let dir = LogDirection::new(xf.clone());
            let g = exp_sl2(&xf);
            ExpReport {
                kind: CertificateKind::Sl2,
                input: format_matrix(&x),
                result: format_matrix_f64(&g),
                image: None,
                branch: dir.branch,
                omega: dir.omega,
                norm: g.det(),
            }
        }
        Element::Quaternion(u) => {
            if u.x != int(0) {
                bail!("exp needs a pure quaternion (zero real part)");
            }
            let tangent = TangentVec::new(u.alg, to_f64(&u.y), to_f64(&u.z), to_f64(&u.w));
            let g = exp_quat(&tangent);
            ExpReport {
                kind: CertificateKind::Quaternion,
                input: format_quaternion(&u),
                result: format_quaternion_f64(&g),
                image: Some(format_matrix_f64(&phi_f64(&g))),
                branch: tangent.branch,
                omega: tangent.omega,
                norm: g.nred(),
            }
        }
    };
    Ok(Outcome::ok(render(&report, cfg.format)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogReport {
    pub kind: CertificateKind,
    pub input: String,
    pub trace: String,
    pub trace_class: TraceClass,
    pub log: String,
    /// `dφ₁(log)` for quaternion input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
    pub branch: Branch,
    pub omega: f64,
}

pub fn log(args: &ElementArgs, cfg: &RunConfig) -> Result<Outcome> {
    let report = match args.element()? {
        Element::Matrix(g) => {
            check_unimodular(&g)?;
            let trace = g.trace();
            let dir = log_sl2(&g.to_f64())?;
            LogReport {
                kind: CertificateKind::Sl2,
                input: format_matrix(&g),
                trace_class: TraceClass::classify(to_f64(&trace), cfg.epsilon),
                trace: to_exact_string(&trace),
                log: format_matrix_f64(&dir.x),
                image: None,
                branch: dir.branch,
                omega: dir.omega,
            }
        }
        Element::Quaternion(g) => {
            if g.nred() != int(1) {
                bail!("reduced norm {} is not 1", to_exact_string(&g.nred()));
            }
            let trace = &g.x * int(2);
            let u = log_quat(&g.to_f64())?;
            let as_quat = latblock::quat::Quaternion::new(g.alg, 0.0, u.u1, u.u2, u.u3);
            LogReport {
                kind: CertificateKind::Quaternion,
                input: format_quaternion(&g),
                trace_class: TraceClass::classify(to_f64(&trace), cfg.epsilon),
                trace: to_exact_string(&trace),
                log: format_quaternion_f64(&as_quat),
                image: Some(format_matrix_f64(&dphi1(&u))),
                branch: u.branch,
                omega: u.omega,
            }
        }
    };
    Ok(Outcome::ok(render(&report, cfg.format)?))
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub element: ElementArgs,
    /// Lattice element γ (matrix or quaternion, matching g); defaults to 1.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Time in [0, 1]; decimals or fractions.
    #[arg(long, default_value = "1/2")]
    pub t: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub kind: CertificateKind,
    pub input: String,
    pub gamma: String,
    pub product: String,
    pub trace: String,
    pub trace_class: TraceClass,
    pub t: f64,
    pub omega: f64,
    pub lambda: f64,
    pub a_lambda: f64,
    pub point: String,
    /// `φ(point)` for quaternion input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
    /// Largest entry gap between the closed form and `power_t` of the product.
    pub cross_check: f64,
}

pub fn curve(args: &CurveArgs, cfg: &RunConfig) -> Result<Outcome> {
    let t = to_f64(&parse_exact(&args.t).context("--t")?);
    let (report, scale) = match args.element.element()? {
        Element::Matrix(g) => {
            check_unimodular(&g)?;
            let gamma =
                parse_matrix(args.gamma.as_deref().unwrap_or("1,0;0,1")).context("--gamma")?;
            let gamma_int = gamma
                .to_integer()
                .context("gamma must have integer entries")?;
            check_unimodular(&gamma).context("gamma")?;
            let product = g.mul(&gamma);
            let trace = product.trace();
            let tr = to_f64(&trace);
            let point = curve_point(&g, &gamma_int, t)?;
            let matrix_route = power_t(&product.to_f64(), t)?;
            let omega = omega_of_trace(tr);
            let lambda = modified_time(t, omega);
            let scale = 1.0 + product.to_f64().frobenius();
            let report = CurveReport {
                kind: CertificateKind::Sl2,
                input: format_matrix(&g),
                gamma: format_matrix(&gamma),
                product: format_matrix(&product),
                trace: to_exact_string(&trace),
                trace_class: TraceClass::classify(tr, cfg.epsilon),
                t,
                omega,
                lambda,
                a_lambda: a_of_lambda(lambda, tr),
                cross_check: point.max_abs_diff(&matrix_route),
                point: format_matrix_f64(&point),
                image: None,
            };
            (report, scale)
        }
        Element::Quaternion(g) => {
            if g.nred() != int(1) {
                bail!("reduced norm {} is not 1", to_exact_string(&g.nred()));
            }
            let gamma =
                parse_quaternion(args.gamma.as_deref().unwrap_or("1"), g.alg).context("--gamma")?;
            let gamma_int = gamma
                .to_integer()
                .context("gamma must have integer coordinates")?;
            if gamma.nred() != int(1) {
                bail!(
                    "gamma has reduced norm {}, not 1",
                    to_exact_string(&gamma.nred())
                );
            }
            let product = g.mul(&gamma)?;
            let trace = &product.x * int(2);
            let tr = to_f64(&trace);
            let point = curve_point_quat(&g, &gamma_int, t)?;
            let image = phi_f64(&point);
            let matrix_route = power_t(&phi_f64(&product.to_f64()), t)?;
            let omega = omega_of_trace(tr);
            let lambda = modified_time(t, omega);
            let scale = 1.0 + phi_f64(&product.to_f64()).frobenius();
            let report = CurveReport {
                kind: CertificateKind::Quaternion,
                input: format_quaternion(&g),
                gamma: format_quaternion(&gamma),
                product: format_quaternion(&product),
                trace: to_exact_string(&trace),
                trace_class: TraceClass::classify(tr, cfg.epsilon),
                t,
                omega,
                lambda,
                a_lambda: a_of_lambda(lambda, tr),
                cross_check: image.max_abs_diff(&matrix_route),
                point: format_quaternion_f64(&point),
                image: Some(format_matrix_f64(&image)),
            };
            (report, scale)
        }
    };
    if !(report.cross_check <= cfg.epsilon * scale) {
        bail!(
            "closed form and power_t disagree by {:e}",
            report.cross_check
        );
    }
    Ok(Outcome::ok(render(&report, cfg.format)?))
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    /// Rational matrix with determinant 1.
    #[arg(long)]
    pub mat: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub input: String,
    pub representative: String,
    pub gamma: String,
}

pub fn reduce(args: &ReduceArgs, cfg: &RunConfig) -> Result<Outcome> {
    let g = parse_matrix(&args.mat).context("--mat")?;
    let (rep, gamma) = coset_reduce(&g)?;
    let report = ReduceReport {
        input: format_matrix(&g),
        representative: format_matrix(&rep.g),
        gamma: format_matrix(&Mat2::from_int(&gamma)),
    };
    Ok(Outcome::ok(render(&report, cfg.format)?))
}

#[derive(Debug, Clone, Args)]
pub struct PellArgs {
    /// Non-square d in p² - dq² = 1.
    #[arg(long)]
    pub d: u64,
    /// Further solutions to list after the fundamental one.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PellEntry {
    pub p: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PellReport {
    pub d: u64,
    pub fundamental: PellEntry,
    pub family: Vec<PellEntry>,
}

pub fn pell(args: &PellArgs, cfg: &RunConfig) -> Result<Outcome> {
    let fundamental = pell_fundamental(args.d)?;
    let family = pell_family(&fundamental, args.count)?;
    let entry = |p: &latblock::quat::PellSolution| PellEntry {
        p: p.p.to_string(),
        q: p.q.to_string(),
    };
    let report = PellReport {
        d: args.d,
        fundamental: entry(&fundamental),
        family: family.iter().map(entry).collect(),
    };
    Ok(Outcome::ok(render(&report, cfg.format)?))
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    #[command(flatten)]
    pub alg: AlgebraFlags,
    /// Search bound for split witnesses.
    #[arg(long, default_value_t = DIVISION_SEARCH_BOUND)]
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub a: i64,
    pub b: i64,
    pub division: bool,
    pub result: DivisionVerdict,
    pub summary: String,
}

pub fn algebra(args: &AlgebraArgs, cfg: &RunConfig) -> Result<Outcome> {
    let Some(alg) = args.alg.algebra()? else {
        bail!("algebra needs --a and --b");
    };
    let verdict = is_division_algebra(alg.a as u64, alg.b as u64, args.bound)?;
    let report = AlgebraReport {
        a: alg.a,
        b: alg.b,
        division: verdict.is_division(),
        summary: verdict.to_string(),
        result: verdict,
    };
    Ok(Outcome::ok(render(&report, cfg.format)?))
}
