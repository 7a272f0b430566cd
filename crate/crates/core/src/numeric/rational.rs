//! Arbitrary-precision rationals and the small helpers the rest of the crate
//! leans on: exact text round-trips, denominator bookkeeping and primitive
//! integer scaling.
//!
//! `BigRational` (from `num-rational`) keeps every value in lowest terms with
//! a positive denominator, which is the invariant all exact checks rely on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(a: &BigRational, b: &BigRational, op: RatOp) -> Result<BigRational> {
    Ok(match op {
        RatOp::Add => a + b,
        RatOp::Sub => a - b,
        RatOp::Mul => a * b,
        RatOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    })
}

/// Shorthand for `n/d` with machine integers. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub fn is_lowest_terms(r: &BigRational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

/// Nearest double. `num-rational` rounds correctly for values in range.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Canonical `num/den` form used in certificates; integers keep the `/1`.
pub fn to_exact_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `n`, `n/d`, or a finite decimal such as `-1.25e-3`, exactly.
pub fn parse_exact(text: &str) -> Result<BigRational> {
    parse_exact_at(text, 0)
}

pub(crate) fn parse_exact_at(text: &str, offset: usize) -> Result<BigRational> {
    let err = |pos: usize, message: String| Error::Parse {
        position: offset + pos,
        message,
    };
    let s = text.trim_start();
    let lead = text.len() - s.len();
    let s = s.trim_end();
    if s.is_empty() {
        return Err(err(lead, "expected a number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n =
            parse_integer(num.trim()).ok_or_else(|| err(lead, format!("bad numerator '{num}'")))?;
        let slash = lead + num.len();
        let d = parse_integer(den.trim())
            .ok_or_else(|| err(slash + 1, format!("bad denominator '{den}'")))?;
        if d.is_zero() {
            return Err(err(slash + 1, "zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| err(lead, format!("invalid number '{s}'")))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    if digits.is_empty() || digits == "-" {
        return None;
    }
    digits.parse().ok()
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a nonzero rational vector to coprime integers whose first nonzero
/// entry is positive. Returns the zero vector unchanged.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    let scaled: Vec<BigInt> = v.iter().map(|r| (r * &l).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return scaled;
    }
    let sign = match scaled.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    scaled.into_iter().map(|x| x / &g * &sign).collect()
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

/// Extended gcd: returns `(g, u, v)` with `a*u + b*v = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Nearest integer to `num/den` (den > 0), ties toward +infinity.
pub fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let twice: BigInt = num * 2 + den;
    twice.div_floor(&(den * 2))
}
