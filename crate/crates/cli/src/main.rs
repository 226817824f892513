//! `walksnf`: walk-matrix certificates for generalized spectral characterization.
//!
//! Exit codes: 0 certified DGS, 10 level bound above 1, 11 inconclusive,
//! 13 mate found, 12 pair not cospectral, 2 bad input, 1 internal failure.

mod config;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use walksnf::certify::{MateWitness, ReductionRule, Theorem1};
use walksnf::factor::DEFAULT_BUDGET;
use walksnf::{
    analyze, annihilator_poly, are_isomorphic, census_with_progress, generalized_cospectral,
    hat_walk_matrix, level_divisibility_check, parse_graph6, rank_mod_p, recover_q, snf, walk_matrix, CensusOptions,
    DgsVerdict, Error, Graph, IntMatrix, LevelBound, RroMatrix, VerdictKind,
};

use config::Config;

#[derive(Parser)]
#[command(name = "walksnf", version, about = "Walk-matrix certificates for generalized spectral characterization")]
struct Cli {
    /// Config file of `key = value` lines mirroring the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print only the JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify or bound DGS for one graph.
    Analyze(AnalyzeArgs),
    /// Compare two graphs and recover the orthogonal matrix between them.
    Pair(PairArgs),
    /// Exhaustive census of all graphs on n vertices.
    Census(CensusArgs),
    /// Smith normal form of an integer matrix in text format.
    Snf(SnfArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// graph6 record, or `-` to read one from stdin.
    graph: String,
    /// Also report rank_p W for this prime (repeatable).
    #[arg(long = "prime", value_name = "P")]
    primes: Vec<u64>,
    /// Wall-clock allowance for factoring, in milliseconds.
    #[arg(long, value_name = "MS")]
    factor_budget: Option<u64>,
    /// Write W in matrix text format.
    #[arg(long, value_name = "PATH")]
    dump_w: Option<PathBuf>,
    /// Write W-hat in matrix text format.
    #[arg(long, value_name = "PATH")]
    dump_what: Option<PathBuf>,
    /// Prime used for W-hat.
    #[arg(long, value_name = "P")]
    hat_prime: Option<u64>,
}

#[derive(Args)]
struct PairArgs {
    /// First graph (graph6).
    a: String,
    /// Second graph (graph6).
    b: String,
    /// Wall-clock allowance for factoring, in milliseconds.
    #[arg(long, value_name = "MS")]
    factor_budget: Option<u64>,
}

#[derive(Args)]
struct CensusArgs {
    /// Number of vertices (1 to 7, or 8 with --allow-n8).
    n: usize,
    /// Resolve isomorphism inside each worker to save memory.
    #[arg(long)]
    dedup: bool,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
    /// Permit n = 8 (about 2.7e8 labelled graphs).
    #[arg(long)]
    allow_n8: bool,
    /// JSON report path [default: census-N.json].
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Mate pair list path [default: census-N.pairs].
    #[arg(long, value_name = "PATH")]
    pairs: Option<PathBuf>,
    /// Wall-clock allowance for factoring, in milliseconds.
    #[arg(long, value_name = "MS")]
    factor_budget: Option<u64>,
}

#[derive(Args)]
struct SnfArgs {
    /// Matrix file, or `-` for stdin.
    file: PathBuf,
}

enum Failure {
    Input(String),
    NotCospectral(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotCospectral => Failure::NotCospectral(e.to_string()),
            Error::MalformedGraph6(_)
            | Error::InvalidGraph(_)
            | Error::SizeLimitExceeded { .. }
            | Error::SizeMismatch(..)
            | Error::NonSquare { .. }
            | Error::DimensionMismatch(_)
            | Error::NotPrime(_)
            | Error::NotOddPrime(_)
            | Error::NotSupported(_)
            | Error::MatrixParse(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn exit_code(kind: VerdictKind) -> u8 {
    match kind {
        VerdictKind::CertifiedDGS => 0,
        VerdictKind::LevelBound => 10,
        VerdictKind::Inconclusive => 11,
        VerdictKind::MateFound => 13,
    }
}

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
    Ok(s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").to_string())
}

fn read_graph(arg: &str) -> Result<Graph, Failure> {
    Ok(parse_graph6(&read_input(arg)?)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn budget(flag: Option<u64>, cfg: &Config) -> Duration {
    flag.or(cfg.factor_budget).map_or(DEFAULT_BUDGET, Duration::from_millis)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

#[derive(Serialize)]
struct InputEcho {
    graph6: String,
    n: usize,
}

#[derive(Serialize)]
struct RankEntry {
    p: String,
    rank: usize,
}

#[derive(Serialize)]
struct VerdictSummary {
    kind: VerdictKind,
    reason: String,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct AnalysisReport {
    input: InputEcho,
    snf: Vec<String>,
    det_w: String,
    ranks: Vec<RankEntry>,
    theorem1: Option<Theorem1>,
    bound: Option<LevelBound>,
    verdict: VerdictSummary,
    exit_code: u8,
}

fn ranks(w: &IntMatrix, verdict: &DgsVerdict, extra: &[u64]) -> Result<Vec<RankEntry>, Failure> {
    let mut out: Vec<RankEntry> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut push = |p: String, rank: usize, out: &mut Vec<RankEntry>| {
        if seen.insert(p.clone()) {
            out.push(RankEntry { p, rank });
        }
    };
    push("2".into(), rank_mod_p(w, 2)?, &mut out);
    if let Some(b) = &verdict.bound {
        for pr in &b.provenance {
            if let (Some(rank), false) = (pr.rank, pr.rule == ReductionRule::Unfactored) {
                push(pr.prime.to_string(), rank, &mut out);
            }
        }
    }
    for &p in extra {
        push(p.to_string(), rank_mod_p(w, p)?, &mut out);
    }
    Ok(out)
}

fn cmd_analyze(args: &AnalyzeArgs, cfg: &Config, json: bool) -> Result<u8, Failure> {
    let g = read_graph(&args.graph)?;
    let verdict = analyze(&g, budget(args.factor_budget, cfg))?;
    let w = walk_matrix(&g);
    let mut primes = cfg.prime.clone();
    primes.extend(&args.primes);

    if let Some(path) = args.dump_w.as_ref().or(cfg.dump_w.as_ref()) {
        write_file(path, &w.matrix().to_text())?;
    }
    if let Some(path) = args.dump_what.as_ref().or(cfg.dump_what.as_ref()) {
        let p = args.hat_prime.or(cfg.hat_prime).unwrap_or(2);
        let ann = annihilator_poly(&g, p)?;
        write_file(path, &hat_walk_matrix(&g, p, &ann)?.to_text())?;
    }

    let code = exit_code(verdict.kind);
    let report = AnalysisReport {
        input: InputEcho { graph6: g.to_graph6(), n: g.n() },
        snf: verdict.snf.iter().map(ToString::to_string).collect(),
        det_w: verdict.det_w.to_string(),
        ranks: ranks(w.matrix(), &verdict, &primes)?,
        theorem1: verdict.theorem1.clone(),
        bound: verdict.bound.clone(),
        verdict: VerdictSummary {
            kind: verdict.kind,
            reason: verdict.reason.clone(),
            notes: verdict.notes.clone(),
        },
        exit_code: code,
    };
    if json {
        print_json(&report);
    } else {
        println!("graph       {}", report.input.graph6);
        println!("n           {}", report.input.n);
        println!("det W       {}", report.det_w);
        println!("SNF         {}", report.snf.join(" "));
        for r in &report.ranks {
            println!("{:<11} {}", format!("rank_{} W", r.p), r.rank);
        }
        match &report.theorem1 {
            Some(Theorem1::Certified) => println!("square-free certified"),
            Some(Theorem1::NotApplicable { reason }) => println!("square-free not applicable: {reason}"),
            None => println!("square-free undecided"),
        }
        if let Some(b) = &report.bound {
            println!("level bound {}{}", b.divisor, if b.complete { "" } else { " (partial factorization)" });
            for pr in &b.provenance {
                println!(
                    "  {}^{} -> {}^{}  {:?}",
                    pr.prime, pr.exponent_in_dn, pr.prime, pr.exponent_in_bound, pr.rule
                );
            }
        }
        println!("verdict     {:?}: {}", report.verdict.kind, report.verdict.reason);
        for note in &report.verdict.notes {
            println!("note        {note}");
        }
    }
    Ok(code)
}

#[derive(Serialize)]
struct PairReport {
    a: String,
    b: String,
    n: usize,
    cospectral: bool,
    isomorphic: bool,
    isomorphism: Option<Vec<usize>>,
    walk_matrix_singular: bool,
    q: Option<RroMatrix>,
    verified: bool,
    level_divides_gcd: Option<bool>,
    verdict_a: DgsVerdict,
}

fn cmd_pair(args: &PairArgs, cfg: &Config, json: bool) -> Result<u8, Failure> {
    let g = read_graph(&args.a)?;
    let h = read_graph(&args.b)?;
    if !generalized_cospectral(&g, &h)? {
        return Err(Error::NotCospectral.into());
    }
    let iso = if g.n() <= walksnf::graph::MAX_ISO_VERTICES { are_isomorphic(&g, &h)? } else { None };
    let (q, singular) = match recover_q(&g, &h) {
        Ok(q) => (Some(q), false),
        Err(Error::SingularWalkMatrix) => (None, true),
        Err(e) => return Err(e.into()),
    };
    let level_divides_gcd = match &q {
        Some(_) => Some(level_divisibility_check(&g, &h)?),
        None => None,
    };
    let mut verdict = analyze(&g, budget(args.factor_budget, cfg))?;
    if let Some(q) = &q {
        if !q.is_permutation() {
            verdict = verdict.with_mate(MateWitness { mate: h.clone(), q: q.clone() });
        }
    }
    let report = PairReport {
        a: g.to_graph6(),
        b: h.to_graph6(),
        n: g.n(),
        cospectral: true,
        isomorphic: iso.is_some() || q.as_ref().is_some_and(RroMatrix::is_permutation),
        isomorphism: iso,
        walk_matrix_singular: singular,
        verified: q.is_some(),
        level_divides_gcd,
        q,
        verdict_a: verdict,
    };
    if json {
        print_json(&report);
    } else {
        println!("a            {}", report.a);
        println!("b            {}", report.b);
        println!("cospectral   yes");
        println!("isomorphic   {}", if report.isomorphic { "yes" } else { "no" });
        match &report.q {
            Some(q) => {
                println!("level        {}", q.level);
                println!("verified     Q^T Q = I, Qe = e, Q^T A(a) Q = A(b)");
                println!("Q =");
                for i in 0..q.q.rows() {
                    let row: Vec<String> = (0..q.q.cols()).map(|j| format!("{:>5}", q.q[(i, j)].to_string())).collect();
                    println!("  {}", row.join(" "));
                }
            }
            None => println!("level        n/a (walk matrix singular)"),
        }
        println!("verdict a    {:?}", report.verdict_a.kind);
    }
    Ok(0)
}

#[derive(Serialize)]
struct CensusSummaryOut<'a> {
    n: usize,
    total_graphs: u64,
    buckets: usize,
    summary: &'a walksnf::census::CensusSummary,
    report: String,
    pairs: String,
}

fn cmd_census(args: &CensusArgs, cfg: &Config, json: bool) -> Result<u8, Failure> {
    let mut opts = CensusOptions::new(args.n);
    opts.dedup = args.dedup || cfg.dedup.unwrap_or(false);
    opts.jobs = args.jobs.or(cfg.jobs).unwrap_or(0);
    opts.allow_n8 = args.allow_n8 || cfg.allow_n8.unwrap_or(false);
    opts.factor_budget = budget(args.factor_budget, cfg);
    let out = args
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from(format!("census-{}.json", args.n)));
    let pairs = args
        .pairs
        .clone()
        .or_else(|| cfg.pairs.clone())
        .unwrap_or_else(|| out.with_extension("pairs"));

    let verbose = args.n >= 8;
    let report = census_with_progress(&opts, &|done, total| {
        if verbose {
            eprintln!("scanned {done}/{total}");
        }
    })?;
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    write_file(&out, &(text + "\n"))?;
    write_file(&pairs, &report.pair_lines())?;

    let s = &report.summary;
    if json {
        print_json(&CensusSummaryOut {
            n: report.n,
            total_graphs: report.total_graphs,
            buckets: report.buckets.len(),
            summary: s,
            report: out.display().to_string(),
            pairs: pairs.display().to_string(),
        });
    } else {
        println!("n                    {}", report.n);
        println!("labelled graphs      {}", report.total_graphs);
        println!("isomorphism classes  {}", s.classes);
        println!("DGS classes          {}", s.dgs_classes);
        println!("mate buckets         {}", report.buckets.len());
        println!("mate pairs           {} ({} singular)", s.mate_pairs, s.singular_mate_pairs);
        println!("certified            {}", s.certified);
        println!("level bound > 1      {}", s.level_bound);
        println!("inconclusive         {}", s.inconclusive);
        println!("audit                {}", if s.divisibility_failures == 0 { "ok" } else { "FAILED" });
        println!("report               {}", out.display());
        println!("pairs                {}", pairs.display());
    }
    Ok(if s.divisibility_failures == 0 { 0 } else { 1 })
}

#[derive(Serialize)]
struct SnfReport {
    rows: usize,
    cols: usize,
    rank: usize,
    invariant_factors: Vec<String>,
}

fn cmd_snf(args: &SnfArgs, json: bool) -> Result<u8, Failure> {
    let text = if args.file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&args.file)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.file.display())))?
    };
    let m = IntMatrix::parse_text(&text)?;
    let s = snf(&m, false);
    let report = SnfReport {
        rows: m.rows(),
        cols: m.cols(),
        rank: s.rank(),
        invariant_factors: s.invariant_factors.iter().map(ToString::to_string).collect(),
    };
    if json {
        print_json(&report);
    } else {
        println!("{}", report.invariant_factors.join(" "));
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(Failure::Input)?,
        None => Config::default(),
    };
    let json = cli.json || cfg.json.unwrap_or(false);
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, &cfg, json),
        Command::Pair(a) => cmd_pair(a, &cfg, json),
        Command::Census(a) => cmd_census(a, &cfg, json),
        Command::Snf(a) => cmd_snf(a, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NotCospectral(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(12)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
