//! Command-line surface of `latblock`.
//!
//! Exit codes: 0 when a command succeeds (for `refute`, when an evading
//! curve was certified), 2 when `refute` exhausts its budget, and 1 for
//! usage, parse and verification errors. Budget exhaustion never means the
//! candidate set blocks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blocking;
pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use latblock::numeric::BigRational;
use latblock::parse::{parse_matrix, parse_quaternion};
use latblock::quat::{QuatAlgebra, Quaternion};
use latblock::sl2::Mat2;

pub use config::{Format, RunConfig, CONFIG_ENV};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "latblock",
    version,
    about = "Connection blocking in quotients of SL(2,R)"
)]
#[command(
    after_help = "Exit codes: 0 success / curve evades, 2 refute budget exhausted, 1 usage, parse or verification error."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides applied on top of the config file.
#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML config file; defaults to $LATBLOCK_CONFIG when set.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Tolerance for numeric cross-checks (default 1e-9).
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Required clearance from every candidate point (default 1e-3).
    #[arg(long, global = true)]
    pub blocking_epsilon: Option<f64>,
    /// Curve samples per family member.
    #[arg(long = "density", global = true)]
    pub sample_density: Option<usize>,
    /// Family members tried before giving up.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Seed for `candidates`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format (default json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl GlobalArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        if let Some(v) = self.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = self.blocking_epsilon {
            cfg.blocking_epsilon = v;
        }
        if let Some(v) = self.sample_density {
            cfg.sample_density = v;
        }
        if let Some(v) = self.budget {
            cfg.budget = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponential of a traceless matrix or a pure quaternion.
    Exp(ElementArgs),
    /// Logarithm of a matrix or norm-one quaternion with trace >= 2.
    Log(ElementArgs),
    /// Point (gγ)^t of a connecting curve.
    Curve(commands::CurveArgs),
    /// Normalized coset representative [[x,0],[z,1/x]] of g·SL(2,Z).
    Reduce(commands::ReduceArgs),
    /// Search for a connecting curve that evades a finite candidate set.
    Refute(blocking::RefuteArgs),
    /// Re-derive every stored quantity of an evasion certificate.
    Replay(blocking::ReplayArgs),
    /// Fundamental solution of p² - dq² = 1 and its successors.
    Pell(commands::PellArgs),
    /// Decide whether H^{a,b} over Q is a division algebra.
    Algebra(commands::AlgebraArgs),
    /// Seeded random candidate blocking sets.
    Candidates(blocking::CandidatesArgs),
}

/// Algebra parameters `i² = a`, `j² = b` for quaternion arguments.
#[derive(Debug, Clone, Args)]
pub struct AlgebraFlags {
    /// Quaternion algebra parameter a.
    #[arg(long, requires = "b")]
    pub a: Option<i64>,
    /// Quaternion algebra parameter b.
    #[arg(long, requires = "a")]
    pub b: Option<i64>,
}

impl AlgebraFlags {
    pub fn algebra(&self) -> Result<Option<QuatAlgebra>> {
        match (self.a, self.b) {
            (Some(a), Some(b)) => Ok(Some(QuatAlgebra::new(a, b)?)),
            _ => Ok(None),
        }
    }
}

/// A matrix (`--mat "a,b;c,d"`) or a quaternion (`--quat "x+yi+zj+wk"`
/// with `--a`, `--b`).
#[derive(Debug, Clone, Args)]
pub struct ElementArgs {
    /// Matrix "a,b;c,d".
    #[arg(long, conflicts_with = "quat")]
    pub mat: Option<String>,
    /// Quaternion "x+yi+zj+wk", with --a and --b.
    #[arg(long)]
    pub quat: Option<String>,
    #[command(flatten)]
    pub alg: AlgebraFlags,
}

pub enum Element {
    Matrix(Mat2<BigRational>),
    Quaternion(Quaternion<BigRational>),
}

impl ElementArgs {
    pub fn element(&self) -> Result<Element> {
        match (&self.mat, &self.quat) {
            (Some(m), None) => Ok(Element::Matrix(parse_matrix(m).context("--mat")?)),
            (None, Some(q)) => {
                let Some(alg) = self.alg.algebra()? else {
                    bail!("--quat needs the algebra parameters --a and --b");
                };
                Ok(Element::Quaternion(
                    parse_quaternion(q, alg).context("--quat")?,
                ))
            }
            _ => bail!("give exactly one of --mat or --quat"),
        }
    }
}

/// What a command prints and how the process exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.global.resolve()?;
    match &cli.command {
        Command::Exp(args) => commands::exp(args, &cfg),
        Command::Log(args) => commands::log(args, &cfg),
        Command::Curve(args) => commands::curve(args, &cfg),
        Command::Reduce(args) => commands::reduce(args, &cfg),
        Command::Refute(args) => blocking::refute(args, &cfg),
        Command::Replay(args) => blocking::replay(args, &cfg),
        Command::Pell(args) => commands::pell(args, &cfg),
        Command::Algebra(args) => commands::algebra(args, &cfg),
        Command::Candidates(args) => blocking::candidates(args, &cfg),
    }
}
