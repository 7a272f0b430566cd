use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::rational::exact_sqrt;

/// Outcome of the norm-square obstruction for `λ² = k/l`.
///
/// With `K = (4kl - 4k²)y²` the equation `K = (ã + kx)(ã - kx)` needs
/// `ã >= kx + 1`, hence `K >= 2kx + 1`. Every `x >= bound` therefore admits
/// no positive integer `ã`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub k: u64,
    pub l: u64,
    pub y: u64,
    pub constant: BigInt,
    /// `X* = ⌊(K - 1)/(2k)⌋ + 1`.
    pub bound: BigInt,
    /// All `(x, ã)` with `1 <= x < X*` solving the equation.
    pub solutions_below: Vec<(BigInt, BigInt)>,
}

impl ObstructionReport {
    /// Least `x0` such that no `x >= x0` (with `x >= 1`) has a solution.
    pub fn least_clear(&self) -> BigInt {
        self.solutions_below
            .last()
            .map_or_else(|| BigInt::from(1), |(x, _)| x + 1)
    }
}

pub fn obstruction_constant(k: u64, l: u64, y: u64) -> BigInt {
    let (k, l, y) = (BigInt::from(k), BigInt::from(l), BigInt::from(y));
    BigInt::from(4) * (&k * &l - &k * &k) * &y * &y
}

pub fn norm_square_obstruction(k: u64, l: u64, y: u64) -> Result<ObstructionReport> {
    if k == 0 || k >= l {
        return Err(Error::InvalidObstruction { k, l });
    }
    if y == 0 {
        return Err(Error::Precondition(
            "trace denominator y must be positive".into(),
        ));
    }
    let constant = obstruction_constant(k, l, y);
    let kk = BigInt::from(k);
    let bound: BigInt = (&constant - BigInt::from(1)).div_floor(&(BigInt::from(2) * &kk)) + 1;
    let mut solutions_below = Vec::new();
    let mut x = BigInt::from(1);
    while x < bound {
        let kx = &kk * &x;
        if let Some(at) = exact_sqrt(&(&constant + &kx * &kx)) {
            solutions_below.push((x.clone(), at));
        }
        x += 1;
    }
    Ok(ObstructionReport {
        k,
        l,
        y,
        constant,
        bound,
        solutions_below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_lambda_squared() {
        let r = norm_square_obstruction(1, 2, 1).unwrap();
        assert_eq!(r.constant, BigInt::from(4));
        assert_eq!(r.bound, BigInt::from(2));
        assert!(r.solutions_below.is_empty());
    }

    #[test]
    fn rejects_lambda_one() {
        assert_eq!(
            norm_square_obstruction(1, 1, 1),
            Err(Error::InvalidObstruction { k: 1, l: 1 })
        );
        assert!(norm_square_obstruction(3, 2, 1).is_err());
    }

    #[test]
    fn solutions_are_genuine() {
        let r = norm_square_obstruction(2, 3, 2).unwrap();
        for (x, at) in &r.solutions_below {
            let kx = BigInt::from(2) * x;
            assert_eq!((at + &kx) * (at - &kx), r.constant);
        }
    }
}
