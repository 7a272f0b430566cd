//! Small dense matrices and exact rational linear algebra.
//!
//! Elimination over `Q` is done fraction-free: rows are first scaled to
//! integers, then reduced with Bareiss' update
//! `a[i][j] <- (p * a[i][j] - a[i][c] * a[r][j]) / prev`, whose division is
//! always exact. Entries stay bounded by minors of the input instead of
//! accumulating denominators.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{lcm_of_denominators, primitive_integer_vector, BigRational};
use crate::error::{Error, Result};
use crate::sl2::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> DenseMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }
}

impl<T: Scalar + Zero + One> DenseMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, k| {
                    acc + self[(i, k)].clone() * v[k].clone()
                })
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub type QMatrix = DenseMatrix<BigRational>;

/// Integer row echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

fn integer_rows(m: &QMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut scales = Vec::with_capacity(m.rows());
    let rows = (0..m.rows())
        .map(|i| {
            let l = lcm_of_denominators(m.row(i));
            let row = m.row(i).iter().map(|v| (v * &l).to_integer()).collect();
            scales.push(l);
            row
        })
        .collect();
    (rows, scales)
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> Echelon {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        for i in r + 1..n_rows {
            for j in c + 1..n_cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: a,
        pivots,
        swaps,
    }
}

pub fn rank(m: &QMatrix) -> usize {
    bareiss(integer_rows(m).0).pivots.len()
}

pub fn determinant(m: &QMatrix) -> BigRational {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigRational::one();
    }
    let (rows, scales) = integer_rows(m);
    let e = bareiss(rows);
    if e.pivots.len() < n {
        return BigRational::zero();
    }
    // The last Bareiss pivot is the determinant of the scaled matrix.
    let mut det = BigRational::from_integer(e.rows[n - 1][n - 1].clone());
    if e.swaps % 2 == 1 {
        det = -det;
    }
    let scale: BigInt = scales.iter().product();
    det / BigRational::from_integer(scale)
}

/// Exact inverse by Gauss-Jordan elimination over `Q`.
pub fn inverse(m: &QMatrix) -> Result<QMatrix> {
    assert_eq!(m.rows(), m.cols(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = QMatrix::identity(n);
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[(i, c)].is_zero())
            .ok_or(Error::Singular)?;
        if p != c {
            for j in 0..n {
                let (x, y) = (a[(p, j)].clone(), a[(c, j)].clone());
                a[(p, j)] = y;
                a[(c, j)] = x;
                let (x, y) = (inv[(p, j)].clone(), inv[(c, j)].clone());
                inv[(p, j)] = y;
                inv[(c, j)] = x;
            }
        }
        let pivot = a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = &a[(c, j)] / &pivot;
            inv[(c, j)] = &inv[(c, j)] / &pivot;
        }
        for i in 0..n {
            if i == c || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..n {
                let da = &f * &a[(c, j)];
                a[(i, j)] = &a[(i, j)] - da;
                let di = &f * &inv[(c, j)];
                inv[(i, j)] = &inv[(i, j)] - di;
            }
        }
    }
    Ok(inv)
}

/// Exact kernel basis of `m`, one vector per free column, each scaled to
/// coprime integers with positive leading entry. Full column rank yields an
/// empty list.
pub fn rational_nullspace(m: &QMatrix) -> Vec<Vec<BigInt>> {
    let cols = m.cols();
    let e = bareiss(integer_rows(m).0);
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (k, &pc) in e.pivots.iter().enumerate().rev() {
                let row = &e.rows[k];
                let sum = (pc + 1..cols).fold(BigRational::zero(), |acc, j| {
                    acc + BigRational::from_integer(row[j].clone()) * &x[j]
                });
                x[pc] = -sum / BigRational::from_integer(row[pc].clone());
            }
            primitive_integer_vector(&x)
        })
        .collect()
}
