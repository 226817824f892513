//! Simple undirected graphs on at most 64 vertices.
//!
//! Each adjacency row is a single `u64` bitmask. Graphs are read and written
//! in graph6, the interchange format used by nauty and friends.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Largest vertex count a [`Graph`] can hold.
pub const MAX_VERTICES: usize = 64;

/// Largest vertex count accepted by [`are_isomorphic`].
pub const MAX_ISO_VERTICES: usize = 16;

const GRAPH6_HEADER: &str = ">>graph6<<";

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Graph { n, rows: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Ok(Graph::empty(n)?.complement())
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("loop at vertex {i}")));
            }
            g.rows[i] |= 1 << j;
            g.rows[j] |= 1 << i;
        }
        Ok(g)
    }

    /// Builds a graph from neighbour lists; the relation must be symmetric.
    pub fn from_adjacency_list(lists: &[Vec<usize>]) -> Result<Self> {
        let n = lists.len();
        let mut g = Graph::empty(n)?;
        for (i, nbrs) in lists.iter().enumerate() {
            for &j in nbrs {
                if j >= n || j == i {
                    return Err(Error::InvalidGraph(format!("bad neighbour {j} of vertex {i}")));
                }
                g.rows[i] |= 1 << j;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if g.has_edge(i, j) != g.has_edge(j, i) {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency list is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(g)
    }

    /// Reads a symmetric 0/1 matrix with zero diagonal.
    pub fn from_adjacency_matrix(m: &IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        let mut g = Graph::empty(n)?;
        for i in 0..n {
            for j in 0..n {
                let v = &m[(i, j)];
                if v.is_one() {
                    if i == j {
                        return Err(Error::InvalidGraph(format!("loop at vertex {i}")));
                    }
                    g.rows[i] |= 1 << j;
                } else if !v.is_zero() {
                    return Err(Error::InvalidGraph(format!("entry ({i},{j}) = {v} is not 0/1")));
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                if g.has_edge(i, j) != g.has_edge(j, i) {
                    return Err(Error::InvalidGraph(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(g)
    }

    /// Decodes an edge bitmask laid out in graph6 order: bit `k` is the
    /// `k`-th pair of the column-major upper triangle (0,1), (0,2), (1,2), (0,3), ...
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self> {
        if n * n.saturating_sub(1) / 2 > 64 {
            return Err(Error::NotSupported(format!("edge mask for n = {n}")));
        }
        let mut g = Graph::empty(n)?;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> k & 1 == 1 {
                    g.rows[i] |= 1 << j;
                    g.rows[j] |= 1 << i;
                }
                k += 1;
            }
        }
        Ok(g)
    }

    pub fn edge_mask(&self) -> u64 {
        let mut mask = 0u64;
        let mut k = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    mask |= 1 << k;
                }
                k += 1;
            }
        }
        mask
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Neighbourhood of `i` as a bitmask.
    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn complement(&self) -> Graph {
        let full = self.full_mask();
        let rows = (0..self.n)
            .map(|i| !self.rows[i] & full & !(1u64 << i))
            .collect();
        Graph { n: self.n, rows }
    }

    pub fn adjacency(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    a[(i, j)] = BigInt::one();
                }
            }
        }
        a
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        if !is_permutation(perm, self.n) {
            return Err(Error::InvalidGraph("not a permutation of the vertex set".into()));
        }
        let mut rows = vec![0u64; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    rows[perm[i]] |= 1 << perm[j];
                }
            }
        }
        Ok(Graph { n: self.n, rows })
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            out.push(((n >> 12) & 63) as u8 + 63);
            out.push(((n >> 6) & 63) as u8 + 63);
            out.push((n & 63) as u8 + 63);
        }
        let mut acc = 0u8;
        let mut nbits = 0;
        for j in 1..n {
            for i in 0..j {
                acc = acc << 1 | self.has_edge(i, j) as u8;
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim();
    let body = text.strip_prefix(GRAPH6_HEADER).unwrap_or(text).as_bytes();
    let bad = |msg: String| Error::MalformedGraph6(msg);

    if body.is_empty() {
        return Err(bad("empty record".into()));
    }
    if let Some(pos) = body.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(bad(format!("byte {} at offset {pos} outside 63..=126", body[pos])));
    }

    let (n, data) = if body[0] == 126 {
        if body.len() >= 2 && body[1] == 126 {
            return Err(bad(format!("8-byte order field exceeds {MAX_VERTICES} vertices")));
        }
        if body.len() < 4 {
            return Err(bad("truncated order field".into()));
        }
        let n = body[1..4]
            .iter()
            .fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
        (n, &body[4..])
    } else {
        ((body[0] - 63) as usize, &body[1..])
    };

    if n == 0 {
        return Err(bad("graphs must have at least one vertex".into()));
    }
    if n > MAX_VERTICES {
        return Err(bad(format!("n = {n} exceeds {MAX_VERTICES}")));
    }
    let nbits = n * (n - 1) / 2;
    let expected = nbits.div_ceil(6);
    if data.len() != expected {
        return Err(bad(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            data.len()
        )));
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.rows[i] |= 1 << j;
                g.rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    let pad = expected * 6 - nbits;
    if pad > 0 && (data[expected - 1] - 63) & ((1u8 << pad) - 1) != 0 {
        return Err(bad("nonzero padding bits".into()));
    }
    Ok(g)
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph6(s)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_graph6())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}, {:?})", self.to_graph6(), self.edges())
    }
}

impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_graph6())
    }
}

pub fn complement(g: &Graph) -> Graph {
    g.complement()
}

pub fn adjacency(g: &Graph) -> IntMatrix {
    g.adjacency()
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = 0u64;
    for &p in perm {
        if p >= n || seen >> p & 1 == 1 {
            return false;
        }
        seen |= 1 << p;
    }
    true
}

/// Stable colour refinement of the disjoint union `g + h`, so that colours are
/// comparable across the two graphs. Vertex `v` of `h` is at index `n + v`.
fn refine_union(g: &Graph, h: &Graph) -> Vec<u32> {
    let n = g.n;
    let nbrs = |v: usize| -> (u64, usize) {
        if v < n {
            (g.rows[v], 0)
        } else {
            (h.rows[v - n], n)
        }
    };
    let mut colors: Vec<u32> = (0..2 * n)
        .map(|v| nbrs(v).0.count_ones())
        .collect();
    let mut classes = count_distinct(&colors);
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = (0..2 * n)
            .map(|v| {
                let (mut mask, off) = nbrs(v);
                let mut nc = Vec::with_capacity(mask.count_ones() as usize);
                while mask != 0 {
                    let u = mask.trailing_zeros() as usize;
                    mask &= mask - 1;
                    nc.push(colors[u + off]);
                }
                nc.sort_unstable();
                (colors[v], nc, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0u32; 2 * n];
        let mut c = 0u32;
        for k in 0..sigs.len() {
            if k > 0 && (sigs[k].0 != sigs[k - 1].0 || sigs[k].1 != sigs[k - 1].1) {
                c += 1;
            }
            next[sigs[k].2] = c;
        }
        let now = c as usize + 1;
        colors = next;
        if now == classes {
            return colors;
        }
        classes = now;
    }
}

fn count_distinct(v: &[u32]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// Exact isomorphism test for `n <= 16`.
///
/// Returns `Some(perm)` with `perm[v]` the image in `h` of vertex `v` of `g`,
/// such that `{i, j}` is an edge of `g` iff `{perm[i], perm[j]}` is an edge of `h`.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    if g.n != h.n {
        return Err(Error::SizeMismatch(g.n, h.n));
    }
    let n = g.n;
    if n > MAX_ISO_VERTICES {
        return Err(Error::SizeLimitExceeded { n, limit: MAX_ISO_VERTICES });
    }
    if g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(None);
    }

    let colors = refine_union(g, h);
    let (cg, ch) = colors.split_at(n);
    let mut hist_g = cg.to_vec();
    let mut hist_h = ch.to_vec();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return Ok(None);
    }

    // Small colour classes first, then prefer vertices attached to what is already placed.
    let class_size = |c: u32| cg.iter().filter(|&&x| x == c).count();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| placed >> v & 1 == 0)
            .min_by_key(|&v| {
                let attached = (g.rows[v] & placed).count_ones();
                (class_size(cg[v]), std::cmp::Reverse(attached), v)
            })
            .expect("unplaced vertex remains");
        order.push(next);
        placed |= 1 << next;
    }

    let mut perm = vec![usize::MAX; n];
    let mut used = 0u64;
    if extend(g, h, cg, ch, &order, 0, &mut perm, &mut used) {
        debug_assert!(g.permute(&perm).map(|p| p == *h).unwrap_or(false));
        Ok(Some(perm))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    h: &Graph,
    cg: &[u32],
    ch: &[u32],
    order: &[usize],
    depth: usize,
    perm: &mut [usize],
    used: &mut u64,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..h.n {
        if *used >> w & 1 == 1 || ch[w] != cg[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.has_edge(u, v) == h.has_edge(perm[u], w));
        if !consistent {
            continue;
        }
        perm[v] = w;
        *used |= 1 << w;
        if extend(g, h, cg, ch, order, depth + 1, perm, used) {
            return true;
        }
        *used &= !(1 << w);
        perm[v] = usize::MAX;
    }
    false
}
