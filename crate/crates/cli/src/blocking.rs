//! `refute`, `replay` and `candidates`: the certificate-producing commands.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use latblock::evade::{
    refute_blocking_from, replay_certificate, BlockingCandidate, CertificateKind,
    EvasionCertificate, RefuteSettings, ReplayReport,
};
use latblock::lattice::CosetRep;
use latblock::parse::{
    format_blocking_file, parse_blocking_file, parse_matrix, parse_quaternion, BlockingPoint,
};
use latblock::quat::{
    exp_quat, is_division_algebra, phi_f64, refute_blocking_quat, QuatAlgebra, QuatMetric,
    TangentVec, DIVISION_SEARCH_BOUND,
};
use latblock::sl2::{exp_sl2, Mat2};
use latblock::Error;

use crate::config::{Format, RunConfig};
use crate::report::render;
use crate::{AlgebraFlags, Outcome, EXIT_BUDGET, EXIT_FAILURE};

/// Attempts per requested point before `candidates` gives up.
const MAX_ATTEMPTS_PER_POINT: usize = 1000;

#[derive(Debug, Clone, Args)]
pub struct RefuteArgs {
    /// Target g: a matrix "a,b;c,d", or "x+yi" with --a and --b.
    #[arg(long)]
    pub target: String,
    /// Candidate blocking points, one per line, `#` comments.
    #[arg(long)]
    pub points: PathBuf,
    /// Where to write the certificate; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub alg: AlgebraFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefuteSummary {
    pub status: String,
    pub kind: CertificateKind,
    pub member: usize,
    pub n: String,
    pub gamma: Vec<String>,
    pub t: f64,
    #[serde(default)]
    pub t_exact: Option<String>,
    pub lambda: f64,
    pub min_clearance: f64,
    pub certified: bool,
    pub certificate: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub status: String,
    pub budget: usize,
    pub best_clearance: f64,
    #[serde(default)]
    pub best_member: Option<usize>,
}

fn require_division(alg: QuatAlgebra) -> Result<()> {
    let verdict = is_division_algebra(alg.a as u64, alg.b as u64, DIVISION_SEARCH_BOUND)?;
    if !verdict.is_division() {
        bail!(
            "H^({},{}) is not a division algebra: {verdict}",
            alg.a,
            alg.b
        );
    }
    Ok(())
}

fn images(points: &[(usize, BlockingPoint)]) -> Vec<Mat2<f64>> {
    points
        .iter()
        .map(|(_, p)| match p {
            BlockingPoint::Matrix(m) => m.clone(),
            BlockingPoint::Quaternion(q) => phi_f64(q),
        })
        .collect()
}

pub fn refute(args: &RefuteArgs, cfg: &RunConfig) -> Result<Outcome> {
    let text = fs::read_to_string(&args.points)
        .with_context(|| format!("reading {}", args.points.display()))?;
    let alg = args.alg.algebra()?;
    let file = parse_blocking_file(&text, alg)
        .with_context(|| format!("blocking file {}", args.points.display()))?;
    let settings = RefuteSettings {
        density: cfg.sample_density,
        budget: cfg.budget,
    };
    let result = match alg {
        None => {
            let g = parse_matrix(&args.target).context("--target")?;
            let rep = CosetRep::reduced(&g)?;
            let candidate =
                BlockingCandidate::for_sl2(file.matrices()?, cfg.blocking_epsilon, &rep.to_f64())?;
            refute_blocking_from(&g, &rep, &candidate, &settings)
        }
        Some(alg) => {
            require_division(alg)?;
            let g = parse_quaternion(&args.target, alg).context("--target")?;
            let metric = QuatMetric::new(alg);
            let target = phi_f64(&g.to_f64());
            let candidate = BlockingCandidate::new(
                images(&file.points),
                cfg.blocking_epsilon,
                &metric,
                &Mat2::identity(),
                &target,
            )?;
            refute_blocking_quat(&g, &candidate, &settings)
        }
    };
    let cert = match result {
        Ok(cert) => cert,
        Err(
            err @ Error::BudgetExceeded {
                budget,
                best_clearance,
                best_member,
            },
        ) => {
            let report = BudgetReport {
                status: "budget_exhausted".into(),
                budget,
                best_clearance,
                best_member,
            };
            return Ok(Outcome {
                stdout: render(&report, cfg.format)?,
                stderr: format!(
                    "{err}\nno verdict: the candidate set was neither refuted nor shown to block\n"
                ),
                code: EXIT_BUDGET,
            });
        }
        Err(err) => return Err(err.into()),
    };
    let json = cert.to_json();
    let Some(out) = &args.out else {
        let stdout = match cfg.format {
            Format::Json => json,
            other => render(&cert, other)?,
        };
        return Ok(Outcome::ok(stdout));
    };
    fs::write(out, &json).with_context(|| format!("writing {}", out.display()))?;
    let summary = RefuteSummary {
        status: "evaded".into(),
        kind: cert.kind,
        member: cert.member.index,
        n: cert.member.n.clone(),
        gamma: cert.gamma.clone(),
        t: cert.t.value,
        t_exact: cert.t.exact.clone(),
        lambda: cert.lambda.value,
        min_clearance: cert.min_clearance(),
        certified: cert.clearances.iter().all(|c| c.certified),
        certificate: out.display().to_string(),
    };
    Ok(Outcome::ok(render(&summary, cfg.format)?))
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Certificate written by `refute`.
    #[arg(long)]
    pub cert: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplaySummary {
    pub kind: CertificateKind,
    pub member: usize,
    #[serde(flatten)]
    pub report: ReplayReport,
}

pub fn replay(args: &ReplayArgs, cfg: &RunConfig) -> Result<Outcome> {
    let text = fs::read_to_string(&args.cert)
        .with_context(|| format!("reading {}", args.cert.display()))?;
    let cert = EvasionCertificate::from_json(&text)?;
    let report = replay_certificate(&cert)?;
    let passed = report.passed;
    let stdout = render(
        &ReplaySummary {
            kind: cert.kind,
            member: cert.member.index,
            report,
        },
        cfg.format,
    )?;
    if passed {
        Ok(Outcome::ok(stdout))
    } else {
        Ok(Outcome {
            stdout,
            stderr: "certificate failed replay\n".into(),
            code: EXIT_FAILURE,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct CandidatesArgs {
    /// Target g; points too close to the start or target coset are redrawn.
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Tangent coordinates are drawn uniformly from [-spread, spread].
    #[arg(long, default_value_t = 1.0)]
    pub spread: f64,
    /// Blocking file to write; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub alg: AlgebraFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatesSummary {
    pub points: usize,
    pub seed: u64,
    pub attempts: usize,
    pub file: String,
}

/// Draws `exp` of uniform tangent vectors, keeping those that are valid
/// candidate points for the target. The output depends only on the
/// arguments and the seed.
pub fn candidates(args: &CandidatesArgs, cfg: &RunConfig) -> Result<Outcome> {
    if !(args.spread > 0.0 && args.spread.is_finite()) {
        bail!("--spread must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let s = args.spread;
    let alg = args.alg.algebra()?;
    let (target, metric) = match alg {
        None => (
            CosetRep::reduced(&parse_matrix(&args.target).context("--target")?)?.to_f64(),
            None,
        ),
        Some(alg) => {
            let g = parse_quaternion(&args.target, alg).context("--target")?;
            (phi_f64(&g.to_f64()), Some(QuatMetric::new(alg)))
        }
    };
    let mut points = Vec::with_capacity(args.count);
    let mut attempts = 0;
    while points.len() < args.count {
        if attempts >= MAX_ATTEMPTS_PER_POINT * args.count {
            bail!(
                "only {} of {} valid points after {attempts} draws",
                points.len(),
                args.count
            );
        }
        attempts += 1;
        let u: [f64; 3] = [
            rng.gen_range(-s..=s),
            rng.gen_range(-s..=s),
            rng.gen_range(-s..=s),
        ];
        let (point, image) = match alg {
            None => {
                let m = exp_sl2(&Mat2::new(u[0], u[1], u[2], -u[0]));
                (BlockingPoint::Matrix(m.clone()), m)
            }
            Some(alg) => {
                let q = exp_quat(&TangentVec::new(alg, u[0], u[1], u[2]));
                let image = phi_f64(&q);
                (BlockingPoint::Quaternion(q), image)
            }
        };
        let valid = match &metric {
            None => BlockingCandidate::for_sl2(vec![image], cfg.blocking_epsilon, &target).is_ok(),
            Some(metric) => BlockingCandidate::new(
                vec![image],
                cfg.blocking_epsilon,
                metric,
                &Mat2::identity(),
                &target,
            )
            .is_ok(),
        };
        if valid {
            points.push(point);
        }
    }
    let text = format!(
        "# {} candidate points, seed {}\n{}",
        args.count,
        cfg.seed,
        format_blocking_file(&points)
    );
    let Some(out) = &args.out else {
        return Ok(Outcome::ok(text));
    };
    fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    let summary = CandidatesSummary {
        points: points.len(),
        seed: cfg.seed,
        attempts,
        file: out.display().to_string(),
    };
    Ok(Outcome::ok(render(&summary, cfg.format)?))
}
