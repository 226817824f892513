#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use walksnf::{Graph, IntMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(0.5) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn residue(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    debug_assert!(!r.is_negative());
    r.to_u64().unwrap()
}

/// Rank over the field with `p` elements by plain elimination on residues.
#[allow(clippy::needless_range_loop)]
pub fn rank_mod(rows: &[Vec<BigInt>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| residue(x, p)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|&y| a[rank][c] * y % p == 1).unwrap();
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c] * inv % p;
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p * p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn matrix_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// `A^k e` for `k = 0..count`, by repeated neighbour sums.
pub fn walk_columns(g: &Graph, count: usize) -> Vec<Vec<BigInt>> {
    let n = g.n();
    let mut v = vec![BigInt::from(1); n];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let next: Vec<BigInt> = (0..n)
            .map(|i| (0..n).filter(|&j| g.has_edge(i, j)).map(|j| v[j].clone()).sum())
            .collect();
        out.push(std::mem::replace(&mut v, next));
    }
    out
}
