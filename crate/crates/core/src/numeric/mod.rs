//! Exact scalar tower (integers, rationals, real quadratic fields), its
//! controlled floating-point embedding, and exact linear algebra.

pub mod approx;
pub mod linalg;
pub mod quad;
pub mod rational;

pub use approx::{embed_real, ApproxReal, EmbedReal, DEFAULT_EPSILON};
pub use linalg::{determinant, inverse, rank, rational_nullspace, DenseMatrix, QMatrix};
pub use quad::{quad_conj_norm, quad_mul, QuadExt};
pub use rational::{rat_arith, BigRational, RatOp};
