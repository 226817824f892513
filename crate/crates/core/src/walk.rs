//! Walk matrices and their compressed variants modulo a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{charpoly, modp, rank_mod_p, IntMatrix};

/// `W = [e, Ae, ..., A^(n-1) e]`, or its analogue for `A + tJ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkMatrix {
    graph: Graph,
    shift: i64,
    w: IntMatrix,
}

impl WalkMatrix {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The `t` in `A + tJ`; zero for the plain walk matrix.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.w
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.w
    }
}

/// `A v` using the bitmask rows of `g`.
pub(crate) fn adj_mul(g: &Graph, v: &[BigInt]) -> Vec<BigInt> {
    (0..g.n())
        .map(|i| {
            let mut row = g.row(i);
            let mut acc = BigInt::zero();
            while row != 0 {
                let j = row.trailing_zeros() as usize;
                row &= row - 1;
                acc += &v[j];
            }
            acc
        })
        .collect()
}

fn shifted_mul(g: &Graph, t: &BigInt, v: &[BigInt]) -> Vec<BigInt> {
    let mut out = adj_mul(g, v);
    if !t.is_zero() {
        let s: BigInt = v.iter().sum::<BigInt>() * t;
        out.iter_mut().for_each(|x| *x += &s);
    }
    out
}

fn ones(n: usize) -> Vec<BigInt> {
    vec![BigInt::one(); n]
}

pub fn walk_matrix(g: &Graph) -> WalkMatrix {
    shifted_walk_matrix(g, 0)
}

/// Walk matrix of `A_t = A + tJ`: columns `e, A_t e, ..., A_t^(n-1) e`.
pub fn shifted_walk_matrix(g: &Graph, t: i64) -> WalkMatrix {
    let n = g.n();
    let tb = BigInt::from(t);
    let mut cols = Vec::with_capacity(n);
    let mut v = ones(n);
    for _ in 0..n {
        let next = shifted_mul(g, &tb, &v);
        cols.push(std::mem::replace(&mut v, next));
    }
    WalkMatrix {
        graph: g.clone(),
        shift: t,
        w: IntMatrix::from_columns(&cols).expect("n >= 1"),
    }
}

/// Monic annihilator of `e` modulo `p`: `a_0 e + a_1 Ae + ... + a_(r-1) A^(r-1) e + A^r e = 0 (mod p)`
/// with `r = rank_p W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilatorPoly {
    pub p: u64,
    pub r: usize,
    /// `a_0..a_(r-1)` as residues in `0..p`.
    pub coeffs: Vec<u64>,
}

impl AnnihilatorPoly {
    /// Adopts externally supplied coefficients after checking them against `g`.
    pub fn from_coeffs(g: &Graph, p: u64, coeffs: Vec<u64>) -> Result<Self> {
        let r = rank_mod_p(walk_matrix(g).matrix(), p)?;
        if coeffs.len() != r {
            return Err(Error::VerificationFailed(format!(
                "expected {r} coefficients, got {}",
                coeffs.len()
            )));
        }
        let ann = AnnihilatorPoly { p, r, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        ann.verify(g)?;
        Ok(ann)
    }

    /// `M(G) = a_0 I + a_1 A + ... + a_(r-1) A^(r-1) + A^r` as an integer matrix.
    pub fn matrix(&self, g: &Graph) -> IntMatrix {
        let a = g.adjacency();
        let mut acc = IntMatrix::identity(g.n());
        for c in self.coeffs.iter().rev() {
            acc = &acc * &a;
            acc.add_scaled_identity(&BigInt::from(*c));
        }
        acc
    }

    /// `M(G) e` computed from walk vectors.
    pub fn m_times_e(&self, g: &Graph) -> Vec<BigInt> {
        let n = g.n();
        let mut acc = vec![BigInt::zero(); n];
        let mut v = ones(n);
        for k in 0..=self.r {
            let c = if k == self.r { BigInt::one() } else { BigInt::from(self.coeffs[k]) };
            if !c.is_zero() {
                for (x, y) in acc.iter_mut().zip(&v) {
                    *x += &c * y;
                }
            }
            if k < self.r {
                v = adj_mul(g, &v);
            }
        }
        acc
    }

    /// The shift vectors `alpha_i = (0^i, a_0, ..., a_(r-1), 1, 0, ...)`, `i = 0..n-r`,
    /// which span the null space of `W` modulo `p`.
    pub fn alpha_vectors(&self, n: usize) -> Vec<Vec<u64>> {
        (0..n - self.r)
            .map(|i| {
                let mut v = vec![0u64; n];
                v[i..i + self.r].copy_from_slice(&self.coeffs);
                v[i + self.r] = 1;
                v
            })
            .collect()
    }

    fn verify(&self, g: &Graph) -> Result<()> {
        let pb = BigInt::from(self.p);
        if self.m_times_e(g).iter().all(|x| x.is_multiple_of(&pb)) {
            Ok(())
        } else {
            Err(Error::VerificationFailed(format!(
                "annihilator coefficients do not kill e modulo {}",
                self.p
            )))
        }
    }
}

pub fn annihilator_poly(g: &Graph, p: u64) -> Result<AnnihilatorPoly> {
    let n = g.n();
    let wm = walk_matrix(g);
    let w = wm.matrix();
    let r = rank_mod_p(w, p)?;

    // A^r e: the column after the independent block, or one more step past W.
    let target = if r < n { w.column(r) } else { adj_mul(g, &w.column(n - 1)) };
    let rhs: Vec<BigInt> = target.into_iter().map(|x| -x).collect();
    let coeffs = if r == 0 {
        Vec::new()
    } else {
        let leading = IntMatrix::from_columns(&(0..r).map(|j| w.column(j)).collect::<Vec<_>>())?;
        modp::solve_mod_p(&leading, &rhs, p)?.ok_or_else(|| {
            Error::VerificationFailed("A^r e is not in the span of the leading walk columns".into())
        })?
    };
    let ann = AnnihilatorPoly { p, r, coeffs };
    ann.verify(g)?;
    Ok(ann)
}

fn checked_annihilator(g: &Graph, p: u64, ann: &AnnihilatorPoly) -> Result<usize> {
    if ann.p != p {
        return Err(Error::VerificationFailed(format!(
            "annihilator built for p = {}, requested p = {p}",
            ann.p
        )));
    }
    let r = rank_mod_p(walk_matrix(g).matrix(), p)?;
    if ann.r != r || ann.coeffs.len() != r {
        return Err(Error::VerificationFailed(format!(
            "annihilator degree {} does not match rank_{p} W = {r}",
            ann.r
        )));
    }
    ann.verify(g)?;
    Ok(r)
}

/// Columns `e, ..., A^(r-1) e, Me, AMe, ..., A^(n-r-1) Me`, with the tail columns optionally divided by `p`.
fn compressed(g: &Graph, p: u64, ann: &AnnihilatorPoly, divide: bool) -> Result<IntMatrix> {
    let r = checked_annihilator(g, p, ann)?;
    let n = g.n();
    let pb = BigInt::from(p);
    let mut cols = Vec::with_capacity(n);
    let mut v = ones(n);
    for _ in 0..r {
        let next = adj_mul(g, &v);
        cols.push(std::mem::replace(&mut v, next));
    }
    let mut v = ann.m_times_e(g);
    for k in r..n {
        let col = if divide {
            if v.iter().any(|x| !x.is_multiple_of(&pb)) {
                return Err(Error::NonIntegralColumn { column: k, p });
            }
            v.iter().map(|x| x / &pb).collect()
        } else {
            v.clone()
        };
        cols.push(col);
        v = adj_mul(g, &v);
    }
    IntMatrix::from_columns(&cols)
}

/// `W-hat`: the tail columns `A^k Me` divided exactly by `p`.
pub fn hat_walk_matrix(g: &Graph, p: u64, ann: &AnnihilatorPoly) -> Result<IntMatrix> {
    compressed(g, p, ann, true)
}

/// `W-bar`: like `W-hat` but without the division.
pub fn bar_walk_matrix(g: &Graph, p: u64, ann: &AnnihilatorPoly) -> Result<IntMatrix> {
    compressed(g, p, ann, false)
}

/// The explicit mod-2 annihilator built from the even-indexed characteristic
/// polynomial coefficients:
/// `A^(n/2) + c_2 A^(n/2-1) + ... + c_n I` for even `n`, and
/// `A^((n+1)/2) + c_2 A^((n-1)/2) + ... + c_(n-1) A` for odd `n`.
pub fn m_matrix_even(g: &Graph) -> IntMatrix {
    let a = g.adjacency();
    let phi = charpoly(&a).expect("adjacency matrices are square");
    let n = g.n();
    // descending coefficients of M as a polynomial in A
    let mut poly: Vec<BigInt> = (0..=n / 2).map(|j| phi.c(2 * j)).collect();
    if n % 2 == 1 {
        poly.push(BigInt::zero());
    }
    let mut acc = IntMatrix::zeros(n, n);
    for c in &poly {
        acc = &acc * &a;
        acc.add_scaled_identity(c);
    }
    acc
}
