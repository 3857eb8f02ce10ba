//! Exact rational dense linear algebra for the small systems that arise from
//! boundary measurements and response matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Determinant by fraction-full Gaussian elimination with row pivoting.
pub fn determinant(mat: &[Vec<BigRational>]) -> BigRational {
    let n = mat.len();
    if n == 0 {
        return BigRational::one();
    }
    debug_assert!(mat.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<BigRational>> = mat.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Solves `A x = b` exactly; errors when `A` is singular.
pub fn solve(mat: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = mat.len();
    let mut a: Vec<Vec<BigRational>> = mat
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::Singular("zero pivot in solve".into()));
        };
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}
