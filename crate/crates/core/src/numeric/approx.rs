use serde::{Deserialize, Serialize};

use super::quad::QuadExt;
use super::rational::{to_f64, BigRational};

/// Default tolerance for comparing floating evaluations against exact values.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// A double-precision value together with the tolerance it is compared under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxReal {
    pub value: f64,
    pub epsilon: f64,
}

impl ApproxReal {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_epsilon(value: f64, epsilon: f64) -> Self {
        assert!(epsilon > 0.0, "tolerance must be positive");
        Self { value, epsilon }
    }

    pub fn approx_eq(&self, other: f64) -> bool {
        (self.value - other).abs() <= self.epsilon
    }

    pub fn approx_eq_exact(&self, other: &BigRational) -> bool {
        self.approx_eq(to_f64(other))
    }
}

/// Exact scalars that have a real embedding.
pub trait EmbedReal {
    fn embed_real(&self) -> ApproxReal;
}

impl EmbedReal for BigRational {
    fn embed_real(&self) -> ApproxReal {
        ApproxReal::new(to_f64(self))
    }
}

impl EmbedReal for QuadExt {
    fn embed_real(&self) -> ApproxReal {
        self.embed()
    }
}

pub fn embed_real<T: EmbedReal>(u: &T) -> ApproxReal {
    u.embed_real()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};
    use num_bigint::BigInt;

    #[test]
    fn rational_embeddings() {
        assert_eq!(embed_real(&rat(1, 2)).value, 0.5);
        assert_eq!(embed_real(&int(0)).value, 0.0);
    }

    #[test]
    fn one_plus_root_two() {
        let u = QuadExt::new(int(1), int(1), BigInt::from(2)).unwrap();
        // 1 + √2 to 20 digits
        assert!(embed_real(&u).approx_eq(2.414_213_562_373_095));
        assert!((embed_real(&u).value - 2.414_213_562_373_095).abs() < 1e-12);
    }
}
