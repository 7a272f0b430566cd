//! Pell equations and the division-algebra test for `H^{a,b}_Q`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::rational::is_perfect_square;

/// Longest continued-fraction period accepted by [`pell_fundamental`].
pub const MAX_PELL_PERIOD: usize = 64;

/// Largest convergent numerator accepted by [`pell_fundamental`].
pub const MAX_PELL_COEFFICIENT: u64 = 1_000_000_000_000_000_000;

/// A solution of `p² - dq² = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PellSolution {
    pub p: BigInt,
    pub q: BigInt,
    pub d: u64,
    pub n: BigInt,
}

impl PellSolution {
    /// Builds a solution, computing `n` from `p` and `q`.
    pub fn new(p: BigInt, q: BigInt, d: u64) -> Self {
        let n = &p * &p - BigInt::from(d) * &q * &q;
        Self { p, q, d, n }
    }

    pub fn verify(&self) -> bool {
        &self.p * &self.p - BigInt::from(self.d) * &self.q * &self.q == self.n
    }
}

/// Least positive solution of `p² - dq² = 1`, read off the convergents of
/// the continued fraction of `√d`.
pub fn pell_fundamental(d: u64) -> Result<PellSolution> {
    if is_perfect_square(&BigInt::from(d)) {
        return Err(Error::PerfectSquare(BigInt::from(d)));
    }
    let a0 = d.sqrt();
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    let (mut h_prev, mut h) = (BigInt::one(), BigInt::from(a0));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let limit = BigInt::from(MAX_PELL_COEFFICIENT);
    let bd = BigInt::from(d);
    let mut period = None;
    // the fundamental solution is the convergent before the end of the
    // first period (even length) or of the second (odd length)
    for step in 1..=2 * MAX_PELL_PERIOD {
        if &h * &h - &bd * &k * &k == BigInt::one() {
            return Ok(PellSolution {
                p: h,
                q: k,
                d,
                n: BigInt::one(),
            });
        }
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        if a == 2 * a0 && period.is_none() {
            period = Some(step);
        }
        if period.is_none() && step >= MAX_PELL_PERIOD {
            break;
        }
        let h_next = BigInt::from(a) * &h + &h_prev;
        let k_next = BigInt::from(a) * &k + &k_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if h > limit {
            return Err(Error::PellLimit {
                d,
                reason: "convergent exceeds 1e18",
            });
        }
    }
    Err(Error::PellLimit {
        d,
        reason: "continued-fraction period exceeds 64",
    })
}

/// The next `count` solutions after `seed` in the class of `(|p|, |q|)`,
/// obtained by repeated multiplication with the fundamental unit. The
/// numerators are strictly increasing.
pub fn pell_family(seed: &PellSolution, count: usize) -> Result<Vec<PellSolution>> {
    if !seed.verify() {
        return Err(Error::Precondition(
            "seed does not satisfy its Pell equation".into(),
        ));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    if seed.n.is_zero() {
        return Err(Error::Precondition(
            "p² - dq² = 0 has only the trivial solution".into(),
        ));
    }
    let unit = pell_fundamental(seed.d)?;
    let d = BigInt::from(seed.d);
    let (mut p, mut q) = (seed.p.abs(), seed.q.abs());
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let np = &p * &unit.p + &d * &q * &unit.q;
        let nq = &p * &unit.q + &q * &unit.p;
        (p, q) = (np, nq);
        out.push(PellSolution {
            p: p.clone(),
            q: q.clone(),
            d: seed.d,
            n: seed.n.clone(),
        });
    }
    Ok(out)
}

/// Three-valued answer to "is `H^{a,b}_Q` a division algebra".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "verdict")]
pub enum DivisionVerdict {
    /// `ax² + by² = z²` has no nontrivial rational solution; the failing
    /// prime is where the Hilbert symbol `(a, b)_p` is `-1`.
    Division { prime: u64 },
    /// A nontrivial solution `(x, y, z)` of `ax² + by² = z²`.
    Split { x: u64, y: u64, z: u64 },
    /// Neither a witness within `bound` nor a local obstruction was found.
    Unknown { bound: u64 },
}

impl DivisionVerdict {
    pub fn is_division(&self) -> bool {
        matches!(self, DivisionVerdict::Division { .. })
    }
}

impl std::fmt::Display for DivisionVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DivisionVerdict::Division { prime } => {
                write!(f, "division (obstruction at p = {prime})")
            }
            DivisionVerdict::Split { x, y, z } => {
                write!(f, "split (witness x = {x}, y = {y}, z = {z})")
            }
            DivisionVerdict::Unknown { bound } => write!(f, "unknown (searched up to {bound})"),
        }
    }
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = u128::from(base % m);
    let m128 = u128::from(m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(u/p)` for an odd prime `p` not dividing `u`.
fn legendre(u: u64, p: u64) -> i32 {
    if pow_mod(u, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn valuation(mut n: u64, p: u64) -> (u32, u64) {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    (e, n)
}

/// The Hilbert symbol `(a, b)_p` for positive integers `a, b`.
pub fn hilbert_symbol(a: u64, b: u64, p: u64) -> i32 {
    let (alpha, u) = valuation(a, p);
    let (beta, v) = valuation(b, p);
    if p == 2 {
        let eps = |x: u64| ((x % 4) / 2) as u32;
        let omega = |x: u64| if x % 8 == 3 || x % 8 == 5 { 1 } else { 0 };
        let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
        -1
    } else {
        1
    };
    if beta % 2 == 1 {
        s *= legendre(u % p, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(v % p, p);
    }
    s
}

/// First nontrivial `(x, y, z)` with `ax² + by² = z²` and `max(x, y) <= bound`,
/// scanning shells of growing `max(x, y)`.
pub fn search_norm_form(a: u64, b: u64, bound: u64) -> Option<(u64, u64, u64)> {
    let hit = |x: u64, y: u64| {
        let s = u128::from(a) * u128::from(x) * u128::from(x)
            + u128::from(b) * u128::from(y) * u128::from(y);
        let z = s.sqrt();
        (z * z == s).then_some((x, y, z as u64))
    };
    for m in 1..=bound {
        for y in 0..m {
            if let Some(w) = hit(m, y) {
                return Some(w);
            }
        }
        for x in 0..=m {
            if let Some(w) = hit(x, m) {
                return Some(w);
            }
        }
    }
    None
}

/// Decides whether `H^{a,b}_Q` is a division algebra.
///
/// A local obstruction (some Hilbert symbol `(a, b)_p = -1`) proves that
/// `ax² + by² = z²` has only the trivial solution; a split verdict always
/// carries an explicit witness. When the symbols are all `+1` but no witness
/// turns up within `search_bound`, the answer is `Unknown`.
pub fn is_division_algebra(a: u64, b: u64, search_bound: u64) -> Result<DivisionVerdict> {
    if a == 0 || b == 0 {
        return Err(Error::Precondition(
            "algebra parameters must be positive".into(),
        ));
    }
    let mut primes: Vec<u64> = factor(a)
        .into_iter()
        .chain(factor(b))
        .map(|(p, _)| p)
        .collect();
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    if let Some(&prime) = primes.iter().find(|&&p| hilbert_symbol(a, b, p) == -1) {
        return Ok(DivisionVerdict::Division { prime });
    }
    Ok(match search_norm_form(a, b, search_bound) {
        Some((x, y, z)) => DivisionVerdict::Split { x, y, z },
        None => DivisionVerdict::Unknown {
            bound: search_bound,
        },
    })
}
