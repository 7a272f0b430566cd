use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::linalg::DenseMatrix;
use crate::sl2::{Mat2, Scalar};

/// The `n×n` identity with `g2` written into rows and columns `i, i+1`
/// (1-based), the standard copy of `SL(2)` inside `SL(n)`.
pub fn embed_sln<T: Scalar + Zero + One>(
    g2: &Mat2<T>,
    n: usize,
    i: usize,
) -> Result<DenseMatrix<T>> {
    if n < 2 {
        return Err(Error::IndexOutOfRange {
            index: n,
            what: "embedding dimension (needs n >= 2)",
        });
    }
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange {
            index: i,
            what: "embedding position (needs 1 <= i <= n-1)",
        });
    }
    let mut m = DenseMatrix::identity(n);
    let k = i - 1;
    m[(k, k)] = g2.x.clone();
    m[(k, k + 1)] = g2.y.clone();
    m[(k + 1, k)] = g2.z.clone();
    m[(k + 1, k + 1)] = g2.w.clone();
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linalg::{determinant, QMatrix};
    use crate::numeric::rational::int;

    #[test]
    fn unipotent_in_sl3() {
        let g = Mat2::new(int(1), int(1), int(0), int(1));
        let e = embed_sln(&g, 3, 1).unwrap();
        let expected = QMatrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ]);
        assert_eq!(e, expected);
        assert_eq!(determinant(&e), int(1));
    }

    #[test]
    fn identity_and_ranges() {
        assert_eq!(
            embed_sln(&Mat2::<i64>::identity(), 4, 2).unwrap(),
            DenseMatrix::identity(4)
        );
        assert!(embed_sln(&Mat2::<i64>::identity(), 3, 3).is_err());
        assert!(embed_sln(&Mat2::<i64>::identity(), 3, 0).is_err());
        assert!(embed_sln(&Mat2::<i64>::identity(), 1, 1).is_err());
    }
}
