//! Text formats: matrices `"a,b;c,d"`, quaternions `"x+yi+zj+wk"`, and
//! blocking-point files with one point per line and `#` comments.
//!
//! Entries accept integers, `n/d` fractions and finite decimals, all read
//! exactly. Error positions are byte offsets into the parsed text.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::rational::{parse_exact_at, to_exact_string, to_f64, BigRational};
use crate::quat::{QuatAlgebra, Quaternion};
use crate::sl2::Mat2;

/// Largest `|det - 1|` (or `|nred - 1|`) accepted for a floating blocking point.
pub const POINT_TOLERANCE: f64 = 1e-9;

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

/// Parses `"a,b;c,d"` (rows separated by `;`).
pub fn parse_matrix(text: &str) -> Result<Mat2<BigRational>> {
    parse_matrix_at(text, 0)
}

fn parse_matrix_at(text: &str, offset: usize) -> Result<Mat2<BigRational>> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 2 {
        return Err(perr(
            offset,
            format!("expected 2 rows separated by ';', found {}", rows.len()),
        ));
    }
    let mut entries = Vec::with_capacity(4);
    let mut pos = offset;
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 {
            return Err(perr(
                pos,
                format!("expected 2 entries separated by ',', found {}", cells.len()),
            ));
        }
        let mut cpos = pos;
        for cell in cells {
            entries.push(parse_exact_at(cell, cpos)?);
            cpos += cell.len() + 1;
        }
        pos += row.len() + 1;
    }
    Ok(Mat2::from_flat(&entries))
}

/// The canonical text form accepted by [`parse_matrix`].
pub fn format_matrix(m: &Mat2<BigRational>) -> String {
    let e = |r: &BigRational| {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            to_exact_string(r)
        }
    };
    format!("{},{};{},{}", e(&m.x), e(&m.y), e(&m.z), e(&m.w))
}

/// Parses a sum of terms `c`, `ci`, `cj`, `ck` with optional coefficients
/// written before the unit, e.g. `"3+2i"` or `"-i + 1/2j"`.
pub fn parse_quaternion(text: &str, alg: QuatAlgebra) -> Result<Quaternion<BigRational>> {
    parse_quaternion_at(text, alg, 0)
}

fn parse_quaternion_at(
    text: &str,
    alg: QuatAlgebra,
    offset: usize,
) -> Result<Quaternion<BigRational>> {
    let bytes = text.as_bytes();
    let mut coords: [Option<BigRational>; 4] = Default::default();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Err(perr(offset + i, "expected a quaternion"));
    }
    let mut first = true;
    while i < bytes.len() {
        let term_start = i;
        let mut negative = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            negative = bytes[i] == b'-';
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(perr(offset + i, "expected '+' or '-' between terms"));
        }
        first = false;
        let num_start = i;
        while i < bytes.len() {
            let c = bytes[i];
            let exponent_sign =
                (c == b'+' || c == b'-') && i > num_start && matches!(bytes[i - 1], b'e' | b'E');
            if c.is_ascii_digit()
                || c == b'.'
                || c == b'/'
                || c == b'e'
                || c == b'E'
                || exponent_sign
            {
                i += 1;
            } else {
                break;
            }
        }
        let num_text = &text[num_start..i];
        skip_ws(&mut i);
        let unit = match bytes.get(i) {
            Some(b'i') => Some(1),
            Some(b'j') => Some(2),
            Some(b'k') => Some(3),
            _ => None,
        };
        if unit.is_some() {
            i += 1;
        }
        let slot = unit.unwrap_or(0);
        let mut value = if num_text.is_empty() {
            if unit.is_none() {
                return Err(perr(
                    offset + num_start,
                    "expected a coefficient or one of i, j, k",
                ));
            }
            BigRational::from_integer(1.into())
        } else {
            parse_exact_at(num_text, offset + num_start)?
        };
        if negative {
            value = -value;
        }
        if coords[slot].is_some() {
            return Err(perr(offset + term_start, "repeated component"));
        }
        coords[slot] = Some(value);
        skip_ws(&mut i);
    }
    let [x, y, z, w] = coords.map(|c| c.unwrap_or_else(BigRational::zero));
    Ok(Quaternion::new(alg, x, y, z, w))
}

/// The canonical text form accepted by [`parse_quaternion`].
pub fn format_quaternion(q: &Quaternion<BigRational>) -> String {
    let mut out = String::new();
    for (v, unit) in q.coords().into_iter().zip(["", "i", "j", "k"]) {
        if v.is_zero() && !(unit.is_empty() && q.coords().iter().all(|c| c.is_zero())) {
            continue;
        }
        let mag = if v.is_integer() {
            v.numer().abs().to_string()
        } else {
            to_exact_string(&v.abs())
        };
        let sign = if v < &BigRational::zero() {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        out.push_str(sign);
        out.push_str(&mag);
        out.push_str(unit);
    }
    out
}

/// One entry of a blocking-point file.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockingPoint {
    Matrix(Mat2<f64>),
    Quaternion(Quaternion<f64>),
}

/// A parsed blocking file together with the 1-based line of every point.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockingFile {
    pub points: Vec<(usize, BlockingPoint)>,
}

impl BlockingFile {
    pub fn matrices(&self) -> Result<Vec<Mat2<f64>>> {
        self.points
            .iter()
            .map(|(line, p)| match p {
                BlockingPoint::Matrix(m) => Ok(m.clone()),
                BlockingPoint::Quaternion(_) => {
                    Err(perr(*line, format!("line {line}: expected a matrix")))
                }
            })
            .collect()
    }

    pub fn quaternions(&self) -> Result<Vec<Quaternion<f64>>> {
        self.points
            .iter()
            .map(|(line, p)| match p {
                BlockingPoint::Quaternion(q) => Ok(q.clone()),
                BlockingPoint::Matrix(_) => {
                    Err(perr(*line, format!("line {line}: expected a quaternion")))
                }
            })
            .collect()
    }
}

/// Parses a blocking file. Lines containing `;` are matrices, other
/// non-empty lines are quaternions in `alg` (required for those). Each point
/// must have determinant or reduced norm 1 within [`POINT_TOLERANCE`] and is
/// rescaled by the square root of that value.
pub fn parse_blocking_file(text: &str, alg: Option<QuatAlgebra>) -> Result<BlockingFile> {
    let mut points = Vec::new();
    let mut offset = 0;
    for (k, raw) in text.split_inclusive('\n').enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        let lead = content.len() - content.trim_start().len();
        let at = offset + lead;
        offset += raw.len();
        if trimmed.is_empty() {
            continue;
        }
        let point = if trimmed.contains(';') {
            let m = parse_matrix_at(trimmed, at)?.to_f64();
            let det = m.det();
            if !det.is_finite() || (det - 1.0).abs() > POINT_TOLERANCE {
                return Err(perr(at, format!("line {line}: determinant {det} is not 1")));
            }
            BlockingPoint::Matrix(m.scale(&(1.0 / det.sqrt())))
        } else {
            let alg = alg.ok_or_else(|| {
                perr(
                    at,
                    format!("line {line}: quaternion points need an algebra"),
                )
            })?;
            let q = parse_quaternion_at(trimmed, alg, at)?.map(to_f64);
            let n = q.nred();
            if !n.is_finite() || (n - 1.0).abs() > POINT_TOLERANCE {
                return Err(perr(at, format!("line {line}: reduced norm {n} is not 1")));
            }
            BlockingPoint::Quaternion(q.scale(&(1.0 / n.sqrt())))
        };
        points.push((line, point));
    }
    Ok(BlockingFile { points })
}

/// Shortest round-trip text of a float matrix; [`parse_matrix`] reads it
/// back to the same doubles.
pub fn format_matrix_f64(m: &Mat2<f64>) -> String {
    format!("{:e},{:e};{:e},{:e}", m.x, m.y, m.z, m.w)
}

/// Shortest round-trip text of a float quaternion, read back by
/// [`parse_quaternion`].
pub fn format_quaternion_f64(q: &Quaternion<f64>) -> String {
    format!("{:e}{:+e}i{:+e}j{:+e}k", q.x, q.y, q.z, q.w)
}

/// Writes points at full precision in the format of [`parse_blocking_file`].
pub fn format_blocking_file(points: &[BlockingPoint]) -> String {
    let mut out = String::new();
    for p in points {
        match p {
            BlockingPoint::Matrix(m) => out.push_str(&format_matrix_f64(m)),
            BlockingPoint::Quaternion(q) => out.push_str(&format_quaternion_f64(q)),
        }
        out.push('\n');
    }
    out
}
