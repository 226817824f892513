//! A 12-vertex generalized cospectral pair related by a level-5 regular
//! rational orthogonal matrix. `W(G)` has invariant factors
//! `(1 x6, 2 x5, 2 * 5^2 * 1145387)`.

use num_bigint::BigInt;

use crate::graph::Graph;
use crate::linalg::{IntMatrix, RatMatrix};

const ADJ_G: [[i64; 12]; 12] = [
    [0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1],
    [0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0],
    [1, 1, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0],
    [0, 1, 1, 0, 0, 0, 1, 0, 1, 1, 1, 1],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1],
    [0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 1, 1, 1, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1],
    [0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0],
];

const ADJ_G_MATE: [[i64; 12]; 12] = [
    [0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1],
    [0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1],
    [0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0],
    [0, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1, 1],
    [0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0],
    [1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0],
];

/// `5 Q`.
const Q_TIMES_5: [[i64; 12]; 12] = [
    [2, 2, -1, -1, 1, 1, 3, -2, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0],
    [2, 2, -1, -1, 1, 1, -2, 3, 0, 0, 0, 0],
    [3, -2, 1, 1, -1, -1, 2, 2, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0],
    [1, 1, 2, 2, 3, -2, -1, -1, 0, 0, 0, 0],
    [-1, -1, 3, -2, 2, 2, 1, 1, 0, 0, 0, 0],
    [-1, -1, -2, 3, 2, 2, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5],
    [-2, 3, 1, 1, -1, -1, 2, 2, 0, 0, 0, 0],
    [1, 1, 2, 2, -2, 3, -1, -1, 0, 0, 0, 0],
];

fn to_matrix(rows: &[[i64; 12]; 12]) -> IntMatrix {
    IntMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

pub fn twelve_vertex_graph() -> Graph {
    Graph::from_adjacency_matrix(&to_matrix(&ADJ_G)).expect("valid adjacency matrix")
}

pub fn twelve_vertex_mate() -> Graph {
    Graph::from_adjacency_matrix(&to_matrix(&ADJ_G_MATE)).expect("valid adjacency matrix")
}

pub fn level_five_q_scaled() -> IntMatrix {
    to_matrix(&Q_TIMES_5)
}

pub fn level_five_q() -> RatMatrix {
    RatMatrix::from_scaled(&level_five_q_scaled(), &BigInt::from(5)).expect("nonzero scale")
}

/// Largest invariant factor of the walk matrix of [`twelve_vertex_graph`].
pub fn twelve_vertex_last_invariant_factor() -> BigInt {
    BigInt::from(2 * 25 * 1_145_387_i64)
}
