//! Exact dense linear algebra over the integers, the rationals and prime fields.

mod charpoly;
mod det;
mod matrix;
pub mod modp;
mod snf;

pub use charpoly::{charpoly, CharPoly};
pub use det::{det, rat_inverse};
pub use matrix::{IntMatrix, RatMatrix};
pub use modp::{nullspace_mod_p, rank_mod_p, solve_mod_p};
pub use snf::{snf, SnfDecomposition};
