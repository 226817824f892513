use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(k, swap);
            sign = -sign;
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                // exact by Sylvester's identity
                let v = (&pivot * &a[(i, j)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = pivot;
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Exact inverse over the rationals via Gauss-Jordan elimination.
pub fn rat_inverse(m: &IntMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.to_rational();
    let mut inv = RatMatrix::identity(n);
    for k in 0..n {
        let piv = (k..n).find(|&i| !a[(i, k)].is_zero()).ok_or(Error::Singular)?;
        if piv != k {
            for j in 0..n {
                let (x, y) = (a[(k, j)].clone(), a[(piv, j)].clone());
                a[(k, j)] = y;
                a[(piv, j)] = x;
                let (x, y) = (inv[(k, j)].clone(), inv[(piv, j)].clone());
                inv[(k, j)] = y;
                inv[(piv, j)] = x;
            }
        }
        let p = a[(k, k)].clone();
        for j in 0..n {
            a[(k, j)] = &a[(k, j)] / &p;
            inv[(k, j)] = &inv[(k, j)] / &p;
        }
        for i in 0..n {
            if i == k || a[(i, k)].is_zero() {
                continue;
            }
            let f: BigRational = a[(i, k)].clone();
            for j in 0..n {
                let t = &f * &a[(k, j)];
                a[(i, j)] -= t;
                let t = &f * &inv[(k, j)];
                inv[(i, j)] -= t;
            }
        }
    }
    Ok(inv)
}
