//! Generalized cospectrality and exact recovery of the regular rational
//! orthogonal matrix relating two graphs.

use std::time::Duration;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::certify::{level_bound, LevelBound};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{charpoly, rat_inverse, snf, RatMatrix};
use crate::walk::walk_matrix;

/// Same spectrum and same complement spectrum.
pub fn generalized_cospectral(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n() != h.n() {
        return Err(Error::SizeMismatch(g.n(), h.n()));
    }
    Ok(charpoly(&g.adjacency())? == charpoly(&h.adjacency())?
        && charpoly(&g.complement().adjacency())? == charpoly(&h.complement().adjacency())?)
}

/// Least common denominator of the entries.
pub fn level(q: &RatMatrix) -> BigInt {
    q.common_denominator()
}

fn serialize_rat<S: Serializer>(q: &RatMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(q.rows()))?;
    for i in 0..q.rows() {
        let row: Vec<String> = (0..q.cols()).map(|j| q[(i, j)].to_string()).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// `Q` with `Q^T A(g) Q = A(h)`, `Q^T Q = I` and `Q e = e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RroMatrix {
    #[serde(serialize_with = "serialize_rat")]
    pub q: RatMatrix,
    #[serde(serialize_with = "crate::serde_big::one")]
    pub level: BigInt,
}

impl RroMatrix {
    pub fn is_permutation(&self) -> bool {
        self.level.is_one()
    }
}

/// `Q^T A(g) Q` when it is the adjacency matrix of a graph.
pub fn verify_q_action(q: &RatMatrix, g: &Graph) -> Option<Graph> {
    let conj = q
        .transpose()
        .checked_mul(&g.adjacency().to_rational())
        .and_then(|m| m.checked_mul(q))
        .ok()?;
    Graph::from_adjacency_matrix(&conj.to_integer()?).ok()
}

/// Checks `Q^T Q = I`, `Q e = e` and `Q^T A(g) Q = A(h)`.
pub fn check_rro(q: &RatMatrix, g: &Graph, h: &Graph) -> Result<()> {
    let n = g.n();
    if h.n() != n || q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch("Q and graph orders differ".into()));
    }
    if !q.transpose().checked_mul(q)?.is_identity() {
        return Err(Error::VerificationFailed("Q^T Q != I".into()));
    }
    if !q.row_sums().iter().all(One::is_one) {
        return Err(Error::VerificationFailed("Q e != e".into()));
    }
    if verify_q_action(q, g).as_ref() != Some(h) {
        return Err(Error::VerificationFailed("Q^T A(g) Q != A(h)".into()));
    }
    Ok(())
}

/// Solves `Q^T = W(h) W(g)^-1` exactly and verifies the result.
pub fn recover_q(g: &Graph, h: &Graph) -> Result<RroMatrix> {
    if !generalized_cospectral(g, h)? {
        return Err(Error::NotCospectral);
    }
    let wg = walk_matrix(g);
    let inv = match rat_inverse(wg.matrix()) {
        Ok(inv) => inv,
        Err(Error::Singular) => return Err(Error::SingularWalkMatrix),
        Err(e) => return Err(e),
    };
    let qt = walk_matrix(h).matrix().to_rational().checked_mul(&inv)?;
    let q = qt.transpose();
    check_rro(&q, g, h)?;
    let level = level(&q);
    Ok(RroMatrix { q, level })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelDivisibility {
    #[serde(serialize_with = "crate::serde_big::one")]
    pub level: BigInt,
    #[serde(serialize_with = "crate::serde_big::one")]
    pub gcd_dn: BigInt,
    pub bound_g: LevelBound,
    pub bound_h: LevelBound,
}

impl LevelDivisibility {
    pub fn divides_gcd(&self) -> bool {
        self.gcd_dn.is_multiple_of(&self.level)
    }

    pub fn divides_bounds(&self) -> bool {
        self.bound_g.divisor.is_multiple_of(&self.level)
            && self.bound_h.divisor.is_multiple_of(&self.level)
    }

    pub fn holds(&self) -> bool {
        self.divides_gcd() && self.divides_bounds()
    }
}

/// Whether the level of the recovered `Q` divides `gcd(d_n(W(g)), d_n(W(h)))`.
pub fn level_divisibility_check(g: &Graph, h: &Graph) -> Result<bool> {
    let rro = recover_q(g, h)?;
    let dn = |x: &Graph| snf(walk_matrix(x).matrix(), false).last().clone();
    Ok(dn(g).gcd(&dn(h)).is_multiple_of(&rro.level))
}

/// Recovers `Q` for the pair and relates its level to both walk matrices and
/// both level bounds.
pub fn level_divisibility(g: &Graph, h: &Graph, budget: Duration) -> Result<LevelDivisibility> {
    let rro = recover_q(g, h)?;
    let dn = |x: &Graph| snf(walk_matrix(x).matrix(), false).last().clone();
    let gcd_dn = dn(g).gcd(&dn(h));
    debug_assert!(!gcd_dn.is_zero());
    Ok(LevelDivisibility {
        level: rro.level,
        gcd_dn,
        bound_g: level_bound(g, budget)?,
        bound_h: level_bound(h, budget)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::DEFAULT_BUDGET;
    use crate::fixtures::{level_five_q, twelve_vertex_graph, twelve_vertex_mate};

    #[test]
    fn cospectral_basics() {
        let p4 = Graph::path(4).unwrap();
        assert!(generalized_cospectral(&p4, &p4).unwrap());
        let k3 = Graph::complete(3).unwrap();
        assert!(!generalized_cospectral(&k3, &Graph::path(3).unwrap()).unwrap());
        assert_eq!(generalized_cospectral(&p4, &k3), Err(Error::SizeMismatch(4, 3)));
    }

    #[test]
    fn permutation_gives_level_one() {
        let g = twelve_vertex_graph();
        let h = g.permute(&[3, 0, 1, 2, 4, 5, 11, 6, 7, 8, 10, 9]).unwrap();
        let rro = recover_q(&g, &h).unwrap();
        assert!(rro.is_permutation());
        assert!(level_divisibility_check(&g, &h).unwrap());
    }

    #[test]
    fn twelve_vertex_pair() {
        let (g, h) = (twelve_vertex_graph(), twelve_vertex_mate());
        let rro = recover_q(&g, &h).unwrap();
        assert_eq!(rro.level, BigInt::from(5));
        assert_eq!(rro.q, level_five_q());
        assert_eq!(verify_q_action(&rro.q, &g), Some(h.clone()));
        let chk = level_divisibility(&g, &h, DEFAULT_BUDGET).unwrap();
        assert!(chk.holds());
    }

    #[test]
    fn singular_and_non_cospectral() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(recover_q(&k3, &k3), Err(Error::SingularWalkMatrix));
        let p4 = Graph::path(4).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(recover_q(&p4, &c4), Err(Error::NotCospectral));
    }

    #[test]
    fn q_action_examples() {
        let g = Graph::path(4).unwrap();
        assert_eq!(verify_q_action(&RatMatrix::identity(4), &g), Some(g.clone()));
        let h = g.permute(&[1, 0, 2, 3]).unwrap();
        let id = RatMatrix::identity(4);
        assert!(matches!(check_rro(&id, &g, &h), Err(Error::VerificationFailed(_))));
        // I - (2/4) J is orthogonal and maps e to -e
        let half = RatMatrix::from_scaled(
            &crate::linalg::IntMatrix::from_i64(&[
                vec![1, -1, -1, -1],
                vec![-1, 1, -1, -1],
                vec![-1, -1, 1, -1],
                vec![-1, -1, -1, 1],
            ]),
            &BigInt::from(2),
        )
        .unwrap();
        assert_eq!(level(&half), BigInt::from(2));
        assert!(check_rro(&half, &g, &g).is_err());
    }
}
