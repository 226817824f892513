//! Exhaustive census of small graphs against the certificates.
//!
//! Every labelled graph on `n` vertices is bucketed by the exact pair of
//! characteristic polynomials `(phi(A), phi(complement))`. Buckets are split into
//! isomorphism classes, and a class is DGS exactly when its bucket holds no
//! other class. Each class is then audited against [`analyze`], and every mate
//! pair with a nonsingular walk matrix gets its `Q` recovered and checked.

use std::collections::{BTreeMap, HashMap};
use std::time::Duration;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{analyze, DgsVerdict, VerdictKind};
use crate::cospectral::recover_q;
use crate::error::{Error, Result};
use crate::factor::DEFAULT_BUDGET;
use crate::graph::{are_isomorphic, Graph};

/// Largest order the census accepts without `allow_n8`.
pub const DEFAULT_MAX_N: usize = 7;
pub const MAX_N: usize = 8;

const CHUNKS: u64 = 256;

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub n: usize,
    /// Resolve isomorphism inside each worker instead of keeping every labelled
    /// graph until the merge. Uses far less memory; the report is the same.
    pub dedup: bool,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub allow_n8: bool,
    pub factor_budget: Duration,
}

impl CensusOptions {
    pub fn new(n: usize) -> Self {
        CensusOptions { n, dedup: false, jobs: 0, allow_n8: false, factor_budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatePair {
    pub a: String,
    pub b: String,
    /// `None` when the walk matrices are singular.
    #[serde(serialize_with = "crate::serde_big::opt")]
    pub level: Option<BigInt>,
    pub level_divides_gcd: Option<bool>,
    pub level_divides_bound: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bucket {
    pub graphs: Vec<String>,
    #[serde(serialize_with = "snf_rows")]
    pub snf: Vec<Vec<BigInt>>,
    pub pairs: Vec<MatePair>,
}

fn snf_rows<S: serde::Serializer>(rows: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        seq.serialize_element(&r.iter().map(ToString::to_string).collect::<Vec<_>>())?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub graph: String,
    pub labelled: u64,
    pub verdict: DgsVerdict,
    pub ground_truth_dgs: bool,
    pub agreement: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub classes: usize,
    pub dgs_classes: usize,
    pub certified: usize,
    pub theorem1_certified: usize,
    pub level_bound: usize,
    pub inconclusive: usize,
    pub mate_pairs: usize,
    pub singular_mate_pairs: usize,
    pub divisibility_failures: usize,
    /// Non-DGS classes with `det W != 0` whose recovered `Q` all have level 1.
    pub permutation_only_mates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub total_graphs: u64,
    pub summary: CensusSummary,
    pub buckets: Vec<Bucket>,
    pub verdict_audit: Vec<AuditRow>,
}

impl CensusReport {
    /// One `"g6a g6b level"` line per mate pair; `NA` marks singular walk matrices.
    pub fn pair_lines(&self) -> String {
        let mut out = String::new();
        for p in self.buckets.iter().flat_map(|b| &b.pairs) {
            let level = p.level.as_ref().map_or_else(|| "NA".to_string(), ToString::to_string);
            out.push_str(&format!("{} {} {}\n", p.a, p.b, level));
        }
        out
    }
}

type Key = [i64; 2 * MAX_N];

/// Characteristic polynomial coefficients `c_1..c_n` of a 0/1 matrix given by
/// bit rows, by Faddeev-LeVerrier in machine integers (exact for `n <= 8`).
fn charpoly_bits(rows: &[u64], out: &mut [i64]) {
    let n = rows.len();
    let mut m = [[0i64; MAX_N]; MAX_N];
    for (i, r) in m.iter_mut().enumerate().take(n) {
        r[i] = 1;
    }
    for k in 1..=n {
        let mut am = [[0i64; MAX_N]; MAX_N];
        for i in 0..n {
            let mut bits = rows[i];
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                for c in 0..n {
                    am[i][c] += m[j][c];
                }
            }
        }
        let tr: i64 = (0..n).map(|i| am[i][i]).sum();
        let c = -tr / k as i64;
        out[k - 1] = c;
        for (i, row) in am.iter_mut().enumerate() {
            row[i] += c;
        }
        m = am;
    }
}

struct Enumerator {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Enumerator {
    fn new(n: usize) -> Self {
        let mut pairs = Vec::new();
        for j in 1..n {
            for i in 0..j {
                pairs.push((i, j));
            }
        }
        Enumerator { n, pairs }
    }

    fn key(&self, mask: u64) -> Key {
        let n = self.n;
        let mut rows = [0u64; MAX_N];
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut comp = [0u64; MAX_N];
        for i in 0..n {
            comp[i] = !rows[i] & full & !(1 << i);
        }
        let mut key = [0i64; 2 * MAX_N];
        charpoly_bits(&rows[..n], &mut key[..n]);
        charpoly_bits(&comp[..n], &mut key[MAX_N..MAX_N + n]);
        key
    }
}

/// Isomorphism classes as `(smallest mask, labelled count)`.
type Classes = Vec<(u64, u64)>;

fn add_to_classes(n: usize, classes: &mut Classes, mask: u64, count: u64) -> Result<()> {
    let g = Graph::from_edge_mask(n, mask)?;
    for c in classes.iter_mut() {
        let rep = Graph::from_edge_mask(n, c.0)?;
        if are_isomorphic(&rep, &g)?.is_some() {
            c.0 = c.0.min(mask);
            c.1 += count;
            return Ok(());
        }
    }
    classes.push((mask, count));
    Ok(())
}

enum Partial {
    Raw(HashMap<Key, Vec<u64>>),
    Dedup(HashMap<Key, Classes>),
}

fn scan(en: &Enumerator, lo: u64, hi: u64, dedup: bool) -> Result<Partial> {
    if dedup {
        let mut map: HashMap<Key, Classes> = HashMap::new();
        for mask in lo..hi {
            add_to_classes(en.n, map.entry(en.key(mask)).or_default(), mask, 1)?;
        }
        Ok(Partial::Dedup(map))
    } else {
        let mut map: HashMap<Key, Vec<u64>> = HashMap::new();
        for mask in lo..hi {
            map.entry(en.key(mask)).or_default().push(mask);
        }
        Ok(Partial::Raw(map))
    }
}

fn merge(n: usize, into: &mut HashMap<Key, Classes>, part: Partial) -> Result<()> {
    match part {
        Partial::Raw(map) => {
            for (k, masks) in map {
                let classes = into.entry(k).or_default();
                for m in masks {
                    add_to_classes(n, classes, m, 1)?;
                }
            }
        }
        Partial::Dedup(map) => {
            for (k, cs) in map {
                let classes = into.entry(k).or_default();
                for (m, c) in cs {
                    add_to_classes(n, classes, m, c)?;
                }
            }
        }
    }
    Ok(())
}

pub fn census(opts: &CensusOptions) -> Result<CensusReport> {
    census_with_progress(opts, &|_, _| {})
}

/// [`census`] reporting `(scanned, total)` labelled graphs as chunks finish.
pub fn census_with_progress(
    opts: &CensusOptions,
    progress: &(dyn Fn(u64, u64) + Sync),
) -> Result<CensusReport> {
    let n = opts.n;
    let cap = if opts.allow_n8 { MAX_N } else { DEFAULT_MAX_N };
    if n > cap {
        return Err(Error::SizeLimitExceeded { n, limit: cap });
    }
    if n == 0 {
        return Err(Error::InvalidGraph("census needs at least one vertex".into()));
    }
    let en = Enumerator::new(n);
    let total: u64 = 1 << en.pairs.len();
    let chunk = total.div_ceil(CHUNKS).max(1);
    let ranges: Vec<(u64, u64)> =
        (0..total).step_by(chunk as usize).map(|lo| (lo, (lo + chunk).min(total))).collect();

    let done = std::sync::atomic::AtomicU64::new(0);
    let run = || -> Result<Vec<Partial>> {
        ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let part = scan(&en, lo, hi, opts.dedup)?;
                let d = done.fetch_add(hi - lo, std::sync::atomic::Ordering::Relaxed) + hi - lo;
                progress(d, total);
                Ok(part)
            })
            .collect()
    };
    let parts = if opts.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::NotSupported(e.to_string()))?
            .install(run)?
    } else {
        run()?
    };

    let mut merged: HashMap<Key, Classes> = HashMap::new();
    for part in parts {
        merge(n, &mut merged, part)?;
    }
    let mut buckets: Vec<Classes> = merged
        .into_values()
        .map(|mut cs| {
            cs.sort_unstable();
            cs
        })
        .collect();
    buckets.sort_unstable_by_key(|cs| cs[0].0);

    audit(n, total, buckets, opts.factor_budget)
}

fn audit(n: usize, total: u64, buckets: Vec<Classes>, budget: Duration) -> Result<CensusReport> {
    let mut summary = CensusSummary::default();
    let mut rows: BTreeMap<u64, AuditRow> = BTreeMap::new();
    let mut out_buckets = Vec::new();

    for classes in &buckets {
        let dgs = classes.len() == 1;
        let graphs: Vec<Graph> =
            classes.iter().map(|&(m, _)| Graph::from_edge_mask(n, m)).collect::<Result<_>>()?;
        let mut verdicts = Vec::with_capacity(graphs.len());
        for (g, &(mask, labelled)) in graphs.iter().zip(classes) {
            let verdict = analyze(g, budget)?;
            let t1 = verdict.theorem1.as_ref().is_some_and(|t| t.is_certified());
            summary.classes += 1;
            summary.dgs_classes += usize::from(dgs);
            summary.theorem1_certified += usize::from(t1);
            match verdict.kind {
                VerdictKind::CertifiedDGS => summary.certified += 1,
                VerdictKind::LevelBound => summary.level_bound += 1,
                VerdictKind::Inconclusive => summary.inconclusive += 1,
                VerdictKind::MateFound => {}
            }
            if !dgs && (t1 || verdict.kind == VerdictKind::CertifiedDGS) {
                return Err(Error::CertificateContradiction(format!(
                    "{} is certified DGS but has a generalized cospectral mate",
                    g.to_graph6()
                )));
            }
            verdicts.push(verdict.clone());
            rows.insert(
                mask,
                AuditRow {
                    graph: g.to_graph6(),
                    labelled,
                    verdict,
                    ground_truth_dgs: dgs,
                    agreement: true,
                },
            );
        }
        if dgs {
            continue;
        }

        let mut pairs = Vec::new();
        let mut nonperm = vec![false; graphs.len()];
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                let (g, h) = (&graphs[i], &graphs[j]);
                let mut pair = MatePair {
                    a: g.to_graph6(),
                    b: h.to_graph6(),
                    level: None,
                    level_divides_gcd: None,
                    level_divides_bound: None,
                };
                match recover_q(g, h) {
                    Ok(rro) => {
                        let gcd = verdicts[i].snf.last().unwrap().gcd(verdicts[j].snf.last().unwrap());
                        let div_gcd = gcd.is_multiple_of(&rro.level);
                        let div_bound = [i, j].iter().all(|&k| {
                            verdicts[k]
                                .bound
                                .as_ref()
                                .is_some_and(|b| b.divisor.is_multiple_of(&rro.level))
                        });
                        if !(div_gcd && div_bound) {
                            summary.divisibility_failures += 1;
                        }
                        if !rro.is_permutation() {
                            nonperm[i] = true;
                            nonperm[j] = true;
                        }
                        pair.level = Some(rro.level);
                        pair.level_divides_gcd = Some(div_gcd);
                        pair.level_divides_bound = Some(div_bound);
                    }
                    Err(Error::SingularWalkMatrix) => summary.singular_mate_pairs += 1,
                    Err(e) => return Err(e),
                }
                summary.mate_pairs += 1;
                pairs.push(pair);
            }
        }
        for (k, v) in verdicts.iter().enumerate() {
            if v.kind != VerdictKind::Inconclusive && !nonperm[k] {
                summary.permutation_only_mates += 1;
            }
        }
        out_buckets.push(Bucket {
            graphs: graphs.iter().map(Graph::to_graph6).collect(),
            snf: verdicts.into_iter().map(|v| v.snf).collect(),
            pairs,
        });
    }

    Ok(CensusReport {
        n,
        total_graphs: total,
        summary,
        buckets: out_buckets,
        verdict_audit: rows.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::charpoly;

    #[test]
    fn bit_charpoly_matches_exact() {
        let en = Enumerator::new(6);
        for mask in (0u64..1 << 15).step_by(97) {
            let g = Graph::from_edge_mask(6, mask).unwrap();
            let key = en.key(mask);
            let a = charpoly(&g.adjacency()).unwrap();
            let c = charpoly(&g.complement().adjacency()).unwrap();
            for i in 0..6 {
                assert_eq!(BigInt::from(key[i]), a.coeffs()[i]);
                assert_eq!(BigInt::from(key[MAX_N + i]), c.coeffs()[i]);
            }
        }
    }

    #[test]
    fn tiny_orders() {
        let r = census(&CensusOptions::new(1)).unwrap();
        assert_eq!(r.total_graphs, 1);
        assert_eq!(r.verdict_audit.len(), 1);
        assert!(r.verdict_audit[0].ground_truth_dgs);
        assert_eq!(r.verdict_audit[0].verdict.kind, VerdictKind::CertifiedDGS);

        let r = census(&CensusOptions::new(4)).unwrap();
        assert_eq!(r.total_graphs, 64);
        assert_eq!(r.summary.classes, 11);
        assert!(r.buckets.is_empty());
        assert_eq!(r.verdict_audit.iter().map(|a| a.labelled).sum::<u64>(), 64);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            census(&CensusOptions::new(8)),
            Err(Error::SizeLimitExceeded { n: 8, limit: 7 })
        ));
        let mut o = CensusOptions::new(9);
        o.allow_n8 = true;
        assert!(matches!(census(&o), Err(Error::SizeLimitExceeded { n: 9, limit: 8 })));
        assert!(census(&CensusOptions::new(0)).is_err());
    }

    #[test]
    fn dedup_and_jobs_do_not_change_the_report() {
        let base = census(&CensusOptions::new(5)).unwrap();
        let mut o = CensusOptions::new(5);
        o.dedup = true;
        o.jobs = 2;
        assert_eq!(census(&o).unwrap(), base);
        assert_eq!(base.summary.classes, 34);
    }
}
