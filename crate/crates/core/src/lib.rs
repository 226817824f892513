//! Exact walk-matrix analysis for the generalized spectral characterization
//! of graphs.
//!
//! A graph `G` is determined by its generalized spectrum (DGS) when every graph
//! sharing the spectra of both `G` and its complement is isomorphic to `G`.
//! This crate computes the walk matrix `W = [e, Ae, ..., A^(n-1)e]`, its Smith
//! normal form, and the arithmetic certificates built on it: the odd/square-free
//! criterion and a divisor bound for the level of any regular rational orthogonal
//! matrix relating `G` to a generalized cospectral mate. It also recovers that
//! matrix exactly for a given pair and audits everything against an exhaustive
//! census of small graphs.
//!
//! Everything is exact: big integers, rationals and prime fields only.

pub mod census;
pub mod certify;
pub mod cospectral;
mod error;
pub mod factor;
pub mod fixtures;
pub mod graph;
pub mod linalg;
mod serde_big;
pub mod walk;

pub use census::{census, census_with_progress, CensusOptions, CensusReport};
pub use certify::{
    analyze, find_t0, level_bound, null_vector_check, phi_shifted, snf_profile_check,
    theorem1_check, DgsVerdict, LevelBound, MateWitness, Theorem1, VerdictKind,
};
pub use cospectral::{
    check_rro, generalized_cospectral, level, level_divisibility, level_divisibility_check,
    recover_q, verify_q_action, RroMatrix,
};
pub use error::{Error, Result};
pub use graph::{are_isomorphic, parse_graph6, Graph};
pub use linalg::{
    charpoly, det, nullspace_mod_p, rank_mod_p, rat_inverse, snf, CharPoly, IntMatrix,
    RatMatrix, SnfDecomposition,
};
pub use walk::{
    annihilator_poly, bar_walk_matrix, hat_walk_matrix, m_matrix_even, shifted_walk_matrix,
    walk_matrix, AnnihilatorPoly, WalkMatrix,
};
