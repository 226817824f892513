//! Gaussian elimination over the prime field with `p` elements, `p < 2^63`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::factor::is_prime_u64;

fn check_prime(p: u64) -> Result<()> {
    if p >= 1 << 63 {
        return Err(Error::NotSupported(format!("modulus {p} exceeds 63 bits")));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

pub fn reduce(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut r = x % &pb;
    if r.is_negative() {
        r += &pb;
    }
    r.to_u64().expect("residue below p")
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn reduce_matrix(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| reduce(x, p)).collect())
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
#[allow(clippy::needless_range_loop)]
fn rref(a: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..cols {
                    let t = mul_mod(f, a[r][j], p);
                    a[i][j] = sub_mod(a[i][j], t, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of `m` over the field with `p` elements.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    check_prime(p)?;
    let mut a = reduce_matrix(m, p);
    Ok(rref(&mut a, p).len())
}

/// Basis of the right null space `{v : m v = 0 (mod p)}`, one vector per free column.
pub fn nullspace_mod_p(m: &IntMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    check_prime(p)?;
    let mut a = reduce_matrix(m, p);
    let pivots = rref(&mut a, p);
    let cols = m.cols();
    let mut basis = Vec::with_capacity(cols - pivots.len());
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[r][free]) % p;
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Some solution of `m x = b (mod p)`, or `None` when the system is inconsistent.
pub fn solve_mod_p(m: &IntMatrix, b: &[BigInt], p: u64) -> Result<Option<Vec<u64>>> {
    check_prime(p)?;
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    let cols = m.cols();
    let mut a = reduce_matrix(m, p);
    for (row, x) in a.iter_mut().zip(b) {
        row.push(reduce(x, p));
    }
    let pivots = rref(&mut a, p);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![0u64; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a[r][cols];
    }
    Ok(Some(x))
}

/// `m v mod p` for a residue vector `v`.
pub fn mul_vec_mod_p(m: &IntMatrix, v: &[u64], p: u64) -> Vec<u64> {
    (0..m.rows())
        .map(|i| {
            m.row(i).iter().zip(v).fold(0u64, |acc, (x, &y)| {
                (acc + mul_mod(reduce(x, p), y, p)) % p
            })
        })
        .collect()
}
