use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Monic integer polynomial `x^n + c_1 x^(n-1) + ... + c_n`, stored as `c_1..c_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharPoly {
    #[serde(serialize_with = "crate::serde_big::vec")]
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        CharPoly { coeffs }
    }

    /// From a descending coefficient list whose first entry must be 1.
    pub fn from_monic(full: &[BigInt]) -> Result<Self> {
        match full.split_first() {
            Some((lead, rest)) if lead.is_one() => Ok(CharPoly { coeffs: rest.to_vec() }),
            _ => Err(Error::VerificationFailed("polynomial is not monic".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_1..c_n`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `c_i` with `c_0 = 1`.
    pub fn c(&self, i: usize) -> BigInt {
        if i == 0 {
            BigInt::one()
        } else {
            self.coeffs[i - 1].clone()
        }
    }

    /// Descending coefficients including the leading 1.
    pub fn monic_coeffs(&self) -> Vec<BigInt> {
        std::iter::once(BigInt::one()).chain(self.coeffs.iter().cloned()).collect()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc * x + c)
    }

    /// Coefficients `c_1..c_n` reduced into `0..p`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|c| {
                let r = c % &pb;
                let r = if r.is_negative() { r + &pb } else { r };
                r.to_u64().expect("residue fits")
            })
            .collect()
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let x = x % p;
        self.reduce_mod(p)
            .into_iter()
            .fold(1 % p, |acc, c| ((acc as u128 * x as u128 + c as u128) % p as u128) as u64)
    }

    /// `phi(M)`, evaluated by Horner's rule on matrices.
    pub fn eval_matrix(&self, m: &IntMatrix) -> Result<IntMatrix> {
        if !m.is_square() {
            return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
        }
        let mut acc = IntMatrix::identity(m.rows());
        for c in &self.coeffs {
            acc = acc.checked_mul(m)?;
            acc.add_scaled_identity(c);
        }
        Ok(acc)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        match n {
            0 => write!(f, "1")?,
            1 => write!(f, "x")?,
            _ => write!(f, "x^{n}")?,
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pow = n - i - 1;
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            let coef = if mag.is_one() && pow > 0 { String::new() } else { mag.to_string() };
            match pow {
                0 => write!(f, " {sign} {coef}")?,
                1 => write!(f, " {sign} {coef}x")?,
                _ => write!(f, " {sign} {coef}x^{pow}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({self})")
    }
}

/// Characteristic polynomial `det(xI - m)` by Faddeev-LeVerrier.
///
/// `N_k = m N_{k-1} + c_{k-1} I`, `c_k = -tr(m N_k) / k`; every division is exact.
pub fn charpoly(m: &IntMatrix) -> Result<CharPoly> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = Vec::with_capacity(n);
    let mut nk = IntMatrix::zeros(n, n);
    let mut prev = BigInt::one();
    for k in 1..=n {
        nk = m.checked_mul(&nk)?;
        nk.add_scaled_identity(&prev);
        let mn = m.checked_mul(&nk)?;
        let trace: BigInt = (0..n).map(|i| mn[(i, i)].clone()).sum();
        let kk = BigInt::from(k);
        debug_assert!((&trace % &kk).is_zero());
        let ck = -(trace / kk);
        coeffs.push(ck.clone());
        prev = ck;
    }
    Ok(CharPoly { coeffs })
}
