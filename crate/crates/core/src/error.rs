use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("radicand mismatch: sqrt({left}) vs sqrt({right})")]
    RadicandMismatch { left: BigInt, right: BigInt },

    #[error("radicand {0} must be a positive non-square integer")]
    InvalidRadicand(BigInt),

    #[error("unsupported logarithm branch: trace {trace} < 2 ({case}); only tr >= 2 has a unique real logarithm")]
    UnsupportedBranch { trace: f64, case: &'static str },

    #[error("matrix is singular")]
    Singular,

    #[error("determinant {det} is not 1")]
    NotUnimodular { det: String },

    #[error("ill-conditioned representative: condition number {condition:e} exceeds 1e12")]
    IllConditioned { condition: f64 },

    #[error("basis elements are linearly dependent over Q")]
    DependentBasis,

    #[error("element is not in the rational span of the basis")]
    NotInSpan,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sequence exhausted after {found} of {wanted} terms")]
    SequenceExhausted { found: usize, wanted: usize },

    #[error("obstruction requires 0 < k < l, got k = {k}, l = {l}")]
    InvalidObstruction { k: u64, l: u64 },

    #[error("index {index} out of range for {what}")]
    IndexOutOfRange { index: usize, what: &'static str },

    #[error("quaternion algebras differ: ({a1},{b1}) vs ({a2},{b2})")]
    AlgebraMismatch { a1: i64, b1: i64, a2: i64, b2: i64 },

    #[error("{0} is a perfect square")]
    PerfectSquare(BigInt),

    #[error("Pell computation for d = {d} exceeds desk-scale limits ({reason})")]
    PellLimit { d: u64, reason: &'static str },

    #[error("H^({a},{b}) is not certified as a division algebra: {verdict}")]
    NotDivisionAlgebra { a: i64, b: i64, verdict: String },

    #[error("no norm-one lattice element with (r, s) != (0, 0) within search bound {bound}")]
    NoFamilySeed { bound: i64 },

    #[error("candidate point {index} is invalid: {reason}")]
    InvalidCandidate { index: usize, reason: String },

    #[error("budget of {budget} family members exhausted; best clearance {best_clearance:e} (member {best_member:?})")]
    BudgetExceeded {
        budget: usize,
        best_clearance: f64,
        best_member: Option<usize>,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("certificate error: {0}")]
    Certificate(String),
}
