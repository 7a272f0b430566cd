use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::rational::{to_exact_string, BigRational};

/// A polynomial in two variables with rational coefficients, stored sparsely
/// as `(i, j) ↦ c` for the monomial `c·xⁱ·yʲ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: BigRational, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    fn add_term(&mut self, c: BigRational, i: u32, j: u32) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn coefficient(&self, i: u32, j: u32) -> BigRational {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for ((i, j), c) in o.terms() {
            p.add_term(c.clone(), i, j);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in self.terms() {
            p.add_term(c * k, i, j);
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in o.terms() {
                p.add_term(c1 * c2, i1 + i2, j1 + j2);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(BigRational::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms().fold(BigRational::zero(), |acc, ((i, j), c)| {
            acc + c
                * num_traits::pow(x.clone(), i as usize)
                * num_traits::pow(y.clone(), j as usize)
        })
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    /// The coefficient of `xⁿ`, as a polynomial in `y`.
    pub fn coefficient_of_x(&self, n: u32) -> BiPoly {
        let mut p = Self::zero();
        for ((i, j), c) in self.terms() {
            if i == n {
                p.add_term(c.clone(), 0, j);
            }
        }
        p
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), c)| {
                let mut s = format!("({})", to_exact_string(c));
                if i > 0 {
                    s.push_str(&format!("*X^{i}"));
                }
                if j > 0 {
                    s.push_str(&format!("*Y^{j}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Greedy index selection: starts at 0 and repeatedly takes the least later
/// index `l` with `R(y_l, y_f) ≠ 0` and `R(y_f, y_l) ≠ 0` for every index `f`
/// taken so far.
///
/// `R` must have a leading term `c·xⁿ` in `x` with constant `c ≠ 0` and
/// `n > 0`, so for fixed `y` only finitely many `x` are roots and the
/// selection can always continue on an unbounded sequence.
pub fn subsequence_nonzero(r: &BiPoly, ys: &[BigRational], length: usize) -> Result<Vec<usize>> {
    let n = r.degree_x().unwrap_or(0);
    let lead = r.coefficient_of_x(n);
    if n == 0 || lead.is_zero() || lead.terms().any(|((_, j), _)| j > 0) {
        return Err(Error::Precondition(
            "polynomial needs a constant leading coefficient in x of positive degree".into(),
        ));
    }
    if ys.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Precondition("sequence must be nondecreasing".into()));
    }
    let mut picked: Vec<usize> = Vec::with_capacity(length);
    let mut l = 0;
    while picked.len() < length {
        if l >= ys.len() {
            return Err(Error::SequenceExhausted {
                found: picked.len(),
                wanted: length,
            });
        }
        let ok = picked
            .iter()
            .all(|&f| !r.eval(&ys[l], &ys[f]).is_zero() && !r.eval(&ys[f], &ys[l]).is_zero());
        if ok {
            picked.push(l);
        }
        l += 1;
    }
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::int;

    fn seq(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let p = BiPoly::x().sub(&BiPoly::y()).pow(2);
        assert_eq!(p.eval(&int(5), &int(2)), int(9));
        assert_eq!(p.coefficient(1, 1), int(-2));
        assert_eq!(p.degree_x(), Some(2));
        assert!(BiPoly::x().sub(&BiPoly::x()).is_zero());
    }

    #[test]
    fn identity_map_when_never_zero() {
        let f = subsequence_nonzero(&BiPoly::x(), &seq(&[1, 2, 3, 4, 5]), 5).unwrap();
        assert_eq!(f, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn skips_duplicates() {
        let r = BiPoly::x().sub(&BiPoly::y());
        assert_eq!(
            subsequence_nonzero(&r, &seq(&[1, 1, 2, 3]), 3).unwrap(),
            vec![0, 2, 3]
        );
        assert_eq!(
            subsequence_nonzero(&r, &seq(&[1, 1, 2, 3]), 4),
            Err(Error::SequenceExhausted {
                found: 3,
                wanted: 4
            })
        );
    }

    #[test]
    fn rejects_bad_leading_term() {
        let r = BiPoly::x().mul(&BiPoly::y());
        assert!(subsequence_nonzero(&r, &seq(&[1, 2]), 2).is_err());
        assert!(subsequence_nonzero(&BiPoly::y(), &seq(&[1, 2]), 2).is_err());
    }
}
