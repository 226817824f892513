//! Arithmetic certificates for DGS built on the Smith normal form of `W(G)`.
//!
//! * [`theorem1_check`]: `det W / 2^floor(n/2)` odd and square-free certifies DGS.
//! * [`snf_profile_check`]: the same condition read off the invariant factors.
//! * [`level_bound`]: a divisor of the level of every regular rational orthogonal
//!   `Q` with `Q^T A Q` a graph. It starts from `d_n` and removes one factor of 2
//!   when `rank_2 W = ceil(n/2)`, and one factor of each odd prime `p | d_n` with
//!   `rank_p W = n - 1`.
//! * [`phi_shifted`], [`find_t0`], [`null_vector_check`]: the odd-prime machinery
//!   around `A + tJ` and the one-dimensional null space of `W` mod `p`.

use std::time::Duration;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cospectral::RroMatrix;
use crate::error::{Error, Result};
use crate::factor::{factorize, is_prime_u64};
use crate::graph::Graph;
use crate::linalg::{charpoly, det, modp, nullspace_mod_p, rank_mod_p, snf, CharPoly, SnfDecomposition};
use crate::walk::walk_matrix;

/// Largest prime [`find_t0`] will scan; the scan costs `O(p^2 n)`.
pub const MAX_T0_PRIME: u64 = 10_007;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Theorem1 {
    Certified,
    NotApplicable { reason: String },
}

impl Theorem1 {
    pub fn is_certified(&self) -> bool {
        matches!(self, Theorem1::Certified)
    }
}

/// `Ok(true)` iff `m` is odd and square-free; errors when an unfactored
/// cofactor leaves the question open.
fn odd_square_free(m: &BigInt, budget: Duration) -> Result<bool> {
    if m.is_zero() || m.is_even() {
        return Ok(false);
    }
    let f = factorize(m, budget);
    if f.primes.iter().any(|&(_, e)| e > 1) || f.unfactored.iter().any(|&(_, e)| e > 1) {
        return Ok(false);
    }
    match f.unfactored.first() {
        Some((c, _)) => Err(Error::FactorizationIncomplete(c.to_string())),
        None => Ok(true),
    }
}

/// Odd and square-free test on `det W / 2^floor(n/2)`.
pub fn theorem1_check(g: &Graph, budget: Duration) -> Result<Theorem1> {
    let d = det(walk_matrix(g).matrix())?;
    theorem1_from_det(g.n(), &d, budget)
}

fn theorem1_from_det(n: usize, d: &BigInt, budget: Duration) -> Result<Theorem1> {
    let na = |reason: &str| Ok(Theorem1::NotApplicable { reason: reason.to_string() });
    if d.is_zero() {
        return na("walk matrix is singular");
    }
    let pow = BigInt::one() << (n / 2);
    if !d.is_multiple_of(&pow) {
        return na("det W is not divisible by 2^floor(n/2)");
    }
    let quotient = (d / pow).abs();
    if quotient.is_even() {
        return na("det W / 2^floor(n/2) is even");
    }
    if odd_square_free(&quotient, budget)? {
        Ok(Theorem1::Certified)
    } else {
        na("det W / 2^floor(n/2) is not square-free")
    }
}

/// Whether the invariant factors read `(1 x ceil(n/2), 2 x (floor(n/2) - 1), 2m)`
/// with `m` odd and square-free.
pub fn matches_square_free_profile(factors: &[BigInt], budget: Duration) -> Result<bool> {
    let n = factors.len();
    let ones = n.div_ceil(2);
    if n == 0 || !factors[..ones].iter().all(|d| d.is_one()) {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let two = BigInt::from(2);
    if !factors[ones..n - 1].iter().all(|d| *d == two) {
        return Ok(false);
    }
    let last = &factors[n - 1];
    if !last.is_multiple_of(&two) {
        return Ok(false);
    }
    odd_square_free(&(last / &two), budget)
}

pub fn snf_profile_check(g: &Graph, budget: Duration) -> Result<bool> {
    let s = snf(walk_matrix(g).matrix(), false);
    matches_square_free_profile(&s.invariant_factors, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionRule {
    /// `p = 2` and `rank_2 W = ceil(n/2)`: one factor of 2 removed.
    EvenPrimeHalfRank,
    /// odd `p` and `rank_p W = n - 1`: one factor of `p` removed.
    OddPrimeCorankOne,
    /// Rank hypothesis not met; full multiplicity kept.
    NoReduction,
    /// Composite cofactor of `d_n` that was not split; full multiplicity kept.
    Unfactored,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    #[serde(serialize_with = "crate::serde_big::one")]
    pub prime: BigInt,
    pub exponent_in_dn: u32,
    pub exponent_in_bound: u32,
    pub rule: ReductionRule,
    /// `rank_p W` when it was computed.
    pub rank: Option<usize>,
}

/// Every admissible level divides `divisor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelBound {
    #[serde(serialize_with = "crate::serde_big::one")]
    pub divisor: BigInt,
    pub provenance: Vec<Provenance>,
    /// False when `d_n` was not completely factored.
    pub complete: bool,
}

impl LevelBound {
    pub fn certifies_dgs(&self) -> bool {
        self.divisor.is_one()
    }

    pub fn entry(&self, prime: &BigInt) -> Option<&Provenance> {
        self.provenance.iter().find(|p| &p.prime == prime)
    }
}

pub fn level_bound(g: &Graph, budget: Duration) -> Result<LevelBound> {
    let w = walk_matrix(g);
    let s = snf(w.matrix(), false);
    level_bound_from_snf(g, w.matrix(), &s, budget)
}

fn level_bound_from_snf(
    g: &Graph,
    w: &crate::linalg::IntMatrix,
    s: &SnfDecomposition,
    budget: Duration,
) -> Result<LevelBound> {
    let n = g.n();
    let dn = s.last();
    if dn.is_zero() {
        return Err(Error::SingularWalkMatrix);
    }
    let f = factorize(dn, budget);
    let mut divisor = BigInt::one();
    let mut provenance = Vec::new();
    for (q, e) in &f.primes {
        let rank = match q.to_u64() {
            Some(small) if small < 1 << 63 => rank_mod_p(w, small)?,
            _ => s.count_coprime_to(q),
        };
        let rule = if *q == BigInt::from(2) {
            if rank == n.div_ceil(2) {
                ReductionRule::EvenPrimeHalfRank
            } else {
                ReductionRule::NoReduction
            }
        } else if rank == n - 1 {
            ReductionRule::OddPrimeCorankOne
        } else {
            ReductionRule::NoReduction
        };
        let kept = if rule == ReductionRule::NoReduction { *e } else { e - 1 };
        divisor *= q.pow(kept);
        provenance.push(Provenance {
            prime: q.clone(),
            exponent_in_dn: *e,
            exponent_in_bound: kept,
            rule,
            rank: Some(rank),
        });
    }
    for (c, e) in &f.unfactored {
        divisor *= c.pow(*e);
        provenance.push(Provenance {
            prime: c.clone(),
            exponent_in_dn: *e,
            exponent_in_bound: *e,
            rule: ReductionRule::Unfactored,
            rank: None,
        });
    }
    Ok(LevelBound { divisor, provenance, complete: f.is_complete() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    CertifiedDGS,
    LevelBound,
    MateFound,
    Inconclusive,
}

/// A generalized cospectral, non-isomorphic mate together with the exact `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MateWitness {
    pub mate: Graph,
    pub q: RroMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgsVerdict {
    pub kind: VerdictKind,
    pub bound: Option<LevelBound>,
    pub theorem1: Option<Theorem1>,
    pub witness: Option<MateWitness>,
    #[serde(serialize_with = "crate::serde_big::one")]
    pub det_w: BigInt,
    #[serde(serialize_with = "crate::serde_big::vec")]
    pub snf: Vec<BigInt>,
    pub reason: String,
    pub notes: Vec<String>,
}

impl DgsVerdict {
    /// Upgrades a verdict once a verified mate is known.
    pub fn with_mate(mut self, witness: MateWitness) -> Self {
        self.kind = VerdictKind::MateFound;
        self.reason = format!(
            "non-isomorphic generalized cospectral mate {} via Q of level {}",
            witness.mate, witness.q.level
        );
        self.witness = Some(witness);
        self
    }
}

/// Runs every certificate on `g` and combines them into one verdict.
pub fn analyze(g: &Graph, budget: Duration) -> Result<DgsVerdict> {
    let w = walk_matrix(g);
    let d = det(w.matrix())?;
    let s = snf(w.matrix(), false);
    let mut notes = Vec::new();
    let mut verdict = DgsVerdict {
        kind: VerdictKind::Inconclusive,
        bound: None,
        theorem1: None,
        witness: None,
        det_w: d.clone(),
        snf: s.invariant_factors.clone(),
        reason: String::new(),
        notes: Vec::new(),
    };
    if d.is_zero() {
        verdict.reason = "walk matrix is singular; no certificate applies".into();
        return Ok(verdict);
    }

    let t1 = match theorem1_from_det(g.n(), &d, budget) {
        Ok(t) => Some(t),
        Err(Error::FactorizationIncomplete(c)) => {
            notes.push(format!("odd/square-free test undecided: cofactor {c} not factored"));
            None
        }
        Err(e) => return Err(e),
    };
    let bound = level_bound_from_snf(g, w.matrix(), &s, budget)?;
    if !bound.complete {
        notes.push("d_n only partially factored; unfactored cofactors kept in the bound".into());
    }
    let t1_certified = t1.as_ref().is_some_and(Theorem1::is_certified);
    if t1_certified && !bound.certifies_dgs() {
        return Err(Error::VerificationFailed(format!(
            "odd/square-free certificate holds but level bound is {}",
            bound.divisor
        )));
    }
    if t1_certified {
        verdict.kind = VerdictKind::CertifiedDGS;
        verdict.reason = "det W / 2^floor(n/2) is odd and square-free".into();
    } else if bound.certifies_dgs() {
        verdict.kind = VerdictKind::CertifiedDGS;
        verdict.reason = "level bound is 1, so every admissible Q is a permutation".into();
    } else {
        verdict.kind = VerdictKind::LevelBound;
        verdict.reason = format!("every admissible level divides {}", bound.divisor);
    }
    verdict.theorem1 = t1;
    verdict.bound = Some(bound);
    verdict.notes = notes;
    Ok(verdict)
}

// Polynomials below are ascending coefficient vectors.

fn ascending(phi: &CharPoly) -> Vec<BigInt> {
    let mut v = phi.monic_coeffs();
    v.reverse();
    v
}

/// `p(-1 - x)` for ascending `p`.
fn reflect(p: &[BigInt]) -> Vec<BigInt> {
    // (-1 - x)^k = (-1)^k (1 + x)^k
    let mut out = vec![BigInt::zero(); p.len()];
    let mut binom: Vec<BigInt> = vec![BigInt::one()];
    for (k, c) in p.iter().enumerate() {
        if k > 0 {
            let mut next = vec![BigInt::zero(); k + 1];
            for i in 0..=k {
                if i < k {
                    next[i] += &binom[i];
                }
                if i > 0 {
                    next[i] += &binom[i - 1];
                }
            }
            binom = next;
        }
        if c.is_zero() {
            continue;
        }
        let signed = if k % 2 == 0 { c.clone() } else { -c };
        for (i, b) in binom.iter().enumerate() {
            out[i] += &signed * b;
        }
    }
    out
}

/// Characteristic polynomial of `A + tJ` from the spectra of `G` and its
/// complement: `(1 + t) phi(G, x) - (-1)^n t phi(complement, -1 - x)`.
pub fn phi_shifted(g: &Graph, t: i64) -> CharPoly {
    let n = g.n();
    let phi_g = charpoly(&g.adjacency()).expect("square");
    let phi_c = charpoly(&g.complement().adjacency()).expect("square");
    let tb = BigInt::from(t);
    let lhs = ascending(&phi_g);
    let rhs = reflect(&ascending(&phi_c));
    let sign = if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let mut out: Vec<BigInt> = lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (BigInt::one() + &tb) * a - &sign * &tb * b)
        .collect();
    out.reverse();
    CharPoly::from_monic(&out).expect("leading terms (1 + t) - t cancel to 1")
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Distinct roots of `poly` (descending residues, leading 1) in the field of
/// `p` elements, stopping once `limit` roots are found.
fn count_roots(monic_rest: &[u64], p: u64, limit: usize) -> usize {
    let mut found = 0;
    for x in 0..p {
        let v = monic_rest
            .iter()
            .fold(1 % p, |acc, &c| ((acc as u128 * x as u128 + c as u128) % p as u128) as u64);
        if v == 0 {
            found += 1;
            if found >= limit {
                break;
            }
        }
    }
    found
}

/// Least `t` in `0..p` for which `phi(x, t)` has at most one distinct root mod `p`.
pub fn find_t0(g: &Graph, p: u64) -> Result<Option<u64>> {
    check_odd_prime(p)?;
    if p > MAX_T0_PRIME {
        return Err(Error::NotSupported(format!(
            "root scan for p = {p} exceeds {MAX_T0_PRIME}"
        )));
    }
    // phi(x, t) = phi(x, 0) + t * delta(x); delta has degree < n.
    let base = phi_shifted(g, 0).reduce_mod(p);
    let one = phi_shifted(g, 1).reduce_mod(p);
    let delta: Vec<u64> = one.iter().zip(&base).map(|(a, b)| (a + p - b) % p).collect();
    for t in 0..p {
        let coeffs: Vec<u64> = base
            .iter()
            .zip(&delta)
            .map(|(b, d)| ((*b as u128 + t as u128 * *d as u128) % p as u128) as u64)
            .collect();
        if count_roots(&coeffs, p, 2) <= 1 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Distinct roots of `phi(x, t)` modulo `p`, by exhaustive evaluation.
pub fn shifted_root_count(g: &Graph, t: i64, p: u64) -> usize {
    count_roots(&phi_shifted(g, t).reduce_mod(p), p, usize::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NullVectorReport {
    pub p: u64,
    /// `(a_0, ..., a_(n-2), 1)`.
    pub eta: Vec<u64>,
    /// `a_0 a_(n-2) = -c_n` and `-a_(i-1) + a_i a_(n-2) = -c_(n-i)` for `i = 1..n-2`.
    pub recurrence_ok: bool,
    /// `phi(a_(n-2)) = 0`.
    pub root_ok: bool,
    /// `(a_(n-2) I - C) eta = 0` for the companion matrix `C` of `phi`.
    pub companion_ok: bool,
}

impl NullVectorReport {
    pub fn all_pass(&self) -> bool {
        self.recurrence_ok && self.root_ok && self.companion_ok
    }
}

/// Checks the identities tying the normalized null vector of `W` mod `p` to the
/// characteristic polynomial, under `rank_p W = n - 1`.
pub fn null_vector_check(g: &Graph, p: u64) -> Result<NullVectorReport> {
    check_odd_prime(p)?;
    let n = g.n();
    let w = walk_matrix(g);
    let rank = rank_mod_p(w.matrix(), p)?;
    if n < 2 || rank != n - 1 {
        return Err(Error::RankHypothesisFailed { p, rank, expected: n.saturating_sub(1) });
    }
    let basis = nullspace_mod_p(w.matrix(), p)?;
    let v = &basis[0];
    let last = v[n - 1];
    if last == 0 {
        return Err(Error::VerificationFailed(
            "null vector has zero last coordinate under the rank hypothesis".into(),
        ));
    }
    let inv = modp::inv_mod(last, p);
    let eta: Vec<u64> = v.iter().map(|&x| (x as u128 * inv as u128 % p as u128) as u64).collect();

    let phi = charpoly(&g.adjacency())?;
    let c = phi.reduce_mod(p); // c[i-1] = c_i
    let ci = |i: usize| c[i - 1];
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % p as u128) as u64;
    let neg = |a: u64| (p - a) % p;
    let top = eta[n - 2];

    let recurrence_ok = (0..=n - 2).all(|i| {
        let prev = if i == 0 { 0 } else { eta[i - 1] };
        (neg(prev) + mul(eta[i], top)) % p == neg(ci(n - i))
    });
    let root_ok = phi.eval_mod(top, p) == 0;

    // Companion matrix: ones on the subdiagonal, last column -(c_n, ..., c_1).
    let companion_ok = (0..n).all(|i| {
        let mut cv = 0u64;
        if i > 0 {
            cv = (cv + eta[i - 1]) % p;
        }
        cv = (cv + mul(neg(ci(n - i)), eta[n - 1])) % p;
        mul(top, eta[i]) == cv
    });

    Ok(NullVectorReport { p, eta, recurrence_ok, root_ok, companion_ok })
}
