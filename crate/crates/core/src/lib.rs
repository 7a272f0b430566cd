// NaN must fail the tolerance guards, hence `!(x <= bound)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evade;
pub mod lattice;
pub mod numeric;
pub mod parse;
pub mod quat;
pub mod sl2;

pub use error::{Error, Result};
