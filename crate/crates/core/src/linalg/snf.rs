//! Smith normal form over the integers.
//!
//! Elimination with gcd pivoting: the smallest nonzero entry is moved to the
//! pivot position, its row and column are cleared with extended-gcd
//! combinations, and any remaining entry the pivot fails to divide is folded
//! back into the pivot row before the next round. On exit the diagonal forms
//! a divisibility chain with trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;

/// Invariant factors `d_1 | d_2 | ...` of an integer matrix, plus the
/// unimodular factors with `m = u * diag(d) * v` when they were requested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfDecomposition {
    #[serde(serialize_with = "crate::serde_big::vec")]
    pub invariant_factors: Vec<BigInt>,
    #[serde(skip)]
    pub u: Option<IntMatrix>,
    #[serde(skip)]
    pub v: Option<IntMatrix>,
    #[serde(skip)]
    rows: usize,
    #[serde(skip)]
    cols: usize,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Largest invariant factor.
    pub fn last(&self) -> &BigInt {
        self.invariant_factors.last().expect("matrices are at least 1x1")
    }

    pub fn product(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Number of invariant factors not divisible by `p`; equals the rank of
    /// the matrix over the field with `p` elements.
    pub fn count_coprime_to(&self, p: &BigInt) -> usize {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_zero() && !d.is_multiple_of(p))
            .count()
    }

    /// The `rows x cols` diagonal matrix `S`.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut s = IntMatrix::zeros(self.rows, self.cols);
        for (i, d) in self.invariant_factors.iter().enumerate() {
            s[(i, i)] = d.clone();
        }
        s
    }
}

/// 2x2 unimodular combination: `new_a = c[0][0] a + c[0][1] b`, `new_b = c[1][0] a + c[1][1] b`.
type Combo = [[BigInt; 2]; 2];

fn combine_rows(m: &mut IntMatrix, a: usize, b: usize, c: &Combo) {
    for j in 0..m.cols() {
        let x = m[(a, j)].clone();
        let y = m[(b, j)].clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m[(a, j)] = &c[0][0] * &x + &c[0][1] * &y;
        m[(b, j)] = &c[1][0] * &x + &c[1][1] * &y;
    }
}

fn combine_cols(m: &mut IntMatrix, a: usize, b: usize, c: &Combo) {
    for i in 0..m.rows() {
        let x = m[(i, a)].clone();
        let y = m[(i, b)].clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m[(i, a)] = &c[0][0] * &x + &c[0][1] * &y;
        m[(i, b)] = &c[1][0] * &x + &c[1][1] * &y;
    }
}

/// `(E^-1)^T` for a determinant-one 2x2 combination.
fn inverse_transpose(c: &Combo) -> Combo {
    [
        [c[1][1].clone(), -&c[1][0]],
        [-&c[0][1], c[0][0].clone()],
    ]
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    // Every row operation E on `a` is mirrored as u <- u E^-1, and every
    // column operation F as v <- F^-1 v, which keeps m = u a v.

    fn row_op(&mut self, k: usize, i: usize, c: Combo) {
        combine_rows(&mut self.a, k, i, &c);
        if let Some(u) = self.u.as_mut() {
            combine_cols(u, k, i, &inverse_transpose(&c));
        }
    }

    fn col_op(&mut self, k: usize, j: usize, c: Combo) {
        combine_cols(&mut self.a, k, j, &c);
        if let Some(v) = self.v.as_mut() {
            combine_rows(v, k, j, &inverse_transpose(&c));
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.a.swap_rows(a, b);
        if let Some(u) = self.u.as_mut() {
            u.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.a.swap_cols(a, b);
        if let Some(v) = self.v.as_mut() {
            v.swap_rows(a, b);
        }
    }

    fn negate_row(&mut self, k: usize) {
        for j in 0..self.a.cols() {
            let x = -&self.a[(k, j)];
            self.a[(k, j)] = x;
        }
        if let Some(u) = self.u.as_mut() {
            for i in 0..u.rows() {
                let x = -&u[(i, k)];
                u[(i, k)] = x;
            }
        }
    }

    /// Eliminates `a[i][k]` against the pivot `a[k][k]`.
    fn clear_below(&mut self, k: usize, i: usize) {
        let p = self.a[(k, k)].clone();
        let b = self.a[(i, k)].clone();
        let one = BigInt::one();
        let zero = BigInt::zero();
        if b.is_multiple_of(&p) {
            let q = &b / &p;
            self.row_op(k, i, [[one, zero], [-q, BigInt::one()]]);
        } else {
            let eg = p.extended_gcd(&b);
            let g = eg.gcd;
            self.row_op(k, i, [[eg.x, eg.y], [-(&b / &g), &p / &g]]);
        }
    }

    /// Eliminates `a[k][j]` against the pivot `a[k][k]`.
    fn clear_right(&mut self, k: usize, j: usize) {
        let p = self.a[(k, k)].clone();
        let b = self.a[(k, j)].clone();
        let one = BigInt::one();
        let zero = BigInt::zero();
        if b.is_multiple_of(&p) {
            let q = &b / &p;
            self.col_op(k, j, [[one, zero], [-q, BigInt::one()]]);
        } else {
            let eg = p.extended_gcd(&b);
            let g = eg.gcd;
            self.col_op(k, j, [[eg.x, eg.y], [-(&b / &g), &p / &g]]);
        }
    }
}

/// Smith normal form of `m`. Transforms are only accumulated when asked for.
pub fn snf(m: &IntMatrix, want_transforms: bool) -> SnfDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = Work {
        a: m.clone(),
        u: want_transforms.then(|| IntMatrix::identity(rows)),
        v: want_transforms.then(|| IntMatrix::identity(cols)),
    };
    let steps = rows.min(cols);

    for k in 0..steps {
        let Some((pi, pj)) = smallest_nonzero(&w.a, k) else {
            break;
        };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);

        loop {
            for i in k + 1..rows {
                if !w.a[(i, k)].is_zero() {
                    w.clear_below(k, i);
                }
            }
            for j in k + 1..cols {
                if !w.a[(k, j)].is_zero() {
                    w.clear_right(k, j);
                }
            }
            // Column operations can refill the pivot column.
            if (k + 1..rows).any(|i| !w.a[(i, k)].is_zero()) {
                continue;
            }
            let p = w.a[(k, k)].clone();
            let offender = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !w.a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    w.row_op(k, i, [[one.clone(), one.clone()], [BigInt::zero(), one]]);
                }
                None => break,
            }
        }
        if w.a[(k, k)].is_negative() {
            w.negate_row(k);
        }
    }

    let invariant_factors = (0..steps).map(|k| w.a[(k, k)].clone()).collect();
    SnfDecomposition { invariant_factors, u: w.u, v: w.v, rows, cols }
}

fn smallest_nonzero(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let done = ax.is_one();
                best = Some((i, j, ax));
                if done {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
