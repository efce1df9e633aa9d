//! Parameter sweeps written as CSV.
//!
//! Column sets per suite (stable):
//!
//! * `naive`, `rabin-karp`: `suite,docs,doc_len,patterns,window_len,
//!   window_hashes_computed,pattern_hashes_computed,hash_steps,hash_comparisons,
//!   char_comparisons,alignments_checked,occurrences,wall_ns`; sweeps `doc_len`.
//! * `merkle`: `text_len,window_len,leaf_count,depth,build_compressions,
//!   verify_compressions,build_ns,prove_ns,verify_ns`; sweeps `text_len`.
//! * `poly`: `n,multipoint_muls,interpolate_muls,muls_per_n_log2_sq,
//!   multipoint_ns,interpolate_ns`; sweeps the point count `n`.
//! * `circuits`: the constraint tally layout `kind,param_name,param_value,total`
//!   followed by one column per gadget. Counts come from the closed forms, so
//!   there is no time column.

use std::time::Instant;

use zkmatch_core::circuitmodel::{closed_form_tally, write_tally_csv, CircuitShape, TallyRow};
use zkmatch_core::field::count_muls;
use zkmatch_core::hashmatch::DEFAULT_BASE;
use zkmatch_core::merkle::{build_tree, prove_membership, verify_membership_counted};
use zkmatch_core::mimc::DEFAULT_SEED;
use zkmatch_core::workload::{
    distinct_elements, lowercase, match_workload, random_poly, random_text, rng,
};
use zkmatch_core::{
    corpus_match, AlphabetPolicy, LegalPatternSet, MatchAlgorithm, MimcParams, PolyRing,
    PrimeField, ProductTree, RollingParams,
};

use crate::commands::write_output;
use crate::{BenchArgs, Failure, Suite};

const DOCS: usize = 4;
const PATTERNS: usize = 8;
const WINDOW: usize = 8;
const CIRCUIT_WINDOW: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub min: usize,
    pub max: usize,
    pub step: usize,
}

impl Sweep {
    pub fn parse(s: &str) -> Result<Self, Failure> {
        let bad = || Failure::new(2, format!("--sweep expects min:max:step, got {s:?}"));
        let parts: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [min, max, step] = parts[..] else {
            return Err(bad());
        };
        if step == 0 {
            return Err(Failure::new(2, "--sweep step must be positive"));
        }
        Ok(Sweep { min, max, step })
    }

    /// Inclusive; empty when `min > max`.
    pub fn values(&self) -> impl Iterator<Item = usize> {
        let max = self.max;
        (self.min..)
            .step_by(self.step)
            .take_while(move |&v| v <= max)
    }
}

fn default_sweep(suite: Suite) -> Sweep {
    let (min, max, step) = match suite {
        Suite::Naive | Suite::RabinKarp => (64, 512, 64),
        Suite::Merkle => (64, 1024, 128),
        Suite::Poly => (128, 1024, 128),
        Suite::Circuits => (16, 256, 16),
    };
    Sweep { min, max, step }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let err = |e: csv::Error| Failure::new(2, format!("writing CSV: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::new(2, format!("writing CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

fn nanos(start: Instant) -> String {
    start.elapsed().as_nanos().to_string()
}

pub fn cmd_bench(args: &BenchArgs) -> Result<u8, Failure> {
    let sweep = match &args.sweep {
        Some(s) => Sweep::parse(s)?,
        None => default_sweep(args.suite),
    };
    let field = args.field.field()?;
    let text = match args.suite {
        Suite::Naive => matching(args, &sweep, MatchAlgorithm::Naive)?,
        Suite::RabinKarp => matching(args, &sweep, MatchAlgorithm::RabinKarp)?,
        Suite::Merkle => merkle(args, &sweep)?,
        Suite::Poly => poly(field, &sweep)?,
        Suite::Circuits => circuits(args, &sweep)?,
    };
    write_output(args.out.as_deref(), &text)?;
    Ok(0)
}

fn matching(args: &BenchArgs, sweep: &Sweep, algo: MatchAlgorithm) -> Result<String, Failure> {
    let header = [
        "suite",
        "docs",
        "doc_len",
        "patterns",
        "window_len",
        "window_hashes_computed",
        "pattern_hashes_computed",
        "hash_steps",
        "hash_comparisons",
        "char_comparisons",
        "alignments_checked",
        "occurrences",
        "wall_ns",
    ];
    let suite = match algo {
        MatchAlgorithm::Naive => "naive",
        MatchAlgorithm::RabinKarp => "rabin-karp",
    };
    let field = args.field.field()?;
    let base = args.field.base.unwrap_or(DEFAULT_BASE);
    let params = RollingParams::new(field, base, WINDOW)?;
    let mut rows = Vec::new();
    for n in sweep.values() {
        let (corpus, patterns) =
            match_workload(n as u64, DOCS, n, PATTERNS, WINDOW, &lowercase(4))?;
        let start = Instant::now();
        let report = corpus_match(&corpus, &patterns, &params, algo)?;
        let wall = nanos(start);
        let c = report.counters;
        rows.push(vec![
            suite.to_string(),
            DOCS.to_string(),
            n.to_string(),
            PATTERNS.to_string(),
            WINDOW.to_string(),
            c.window_hashes_computed.to_string(),
            c.pattern_hashes_computed.to_string(),
            c.hash_steps.to_string(),
            c.hash_comparisons.to_string(),
            c.char_comparisons.to_string(),
            c.alignments_checked.to_string(),
            report.total_occurrences().to_string(),
            wall,
        ]);
    }
    csv_text(&header, &rows)
}

fn merkle(args: &BenchArgs, sweep: &Sweep) -> Result<String, Failure> {
    let header = [
        "text_len",
        "window_len",
        "leaf_count",
        "depth",
        "build_compressions",
        "verify_compressions",
        "build_ns",
        "prove_ns",
        "verify_ns",
    ];
    let field = args.field.field()?;
    let seed = args
        .field
        .seed
        .as_deref()
        .map_or(DEFAULT_SEED, str::as_bytes);
    let mimc = MimcParams::from_seed(field, seed)?;
    let policy = AlphabetPolicy::printable();
    let mut rows = Vec::new();
    for n in sweep.values().filter(|&n| n >= WINDOW) {
        let text = random_text(&mut rng(n as u64), n, &lowercase(26));
        let set = LegalPatternSet::from_texts([text.as_slice()], WINDOW, &policy)?;
        let start = Instant::now();
        let tree = build_tree(&set, &mimc)?;
        let build_ns = nanos(start);
        let member = &text[..WINDOW];
        let start = Instant::now();
        let proof = prove_membership(&tree, &set, member)?;
        let prove_ns = nanos(start);
        let start = Instant::now();
        let (ok, calls) = verify_membership_counted(tree.root(), &proof, &mimc)?;
        let verify_ns = nanos(start);
        debug_assert!(ok);
        rows.push(vec![
            n.to_string(),
            WINDOW.to_string(),
            tree.leaf_count().to_string(),
            tree.depth().to_string(),
            tree.build_compressions().to_string(),
            calls.to_string(),
            build_ns,
            prove_ns,
            verify_ns,
        ]);
    }
    csv_text(&header, &rows)
}

fn poly(field: PrimeField, sweep: &Sweep) -> Result<String, Failure> {
    let header = [
        "n",
        "multipoint_muls",
        "interpolate_muls",
        "muls_per_n_log2_sq",
        "multipoint_ns",
        "interpolate_ns",
    ];
    let ring = PolyRing::new(field);
    let mut rows = Vec::new();
    for n in sweep.values().filter(|&n| n >= 2) {
        let mut g = rng(n as u64);
        let points = distinct_elements(&mut g, &field, n);
        let f = random_poly(&mut g, &field, n - 1);
        let tree = ProductTree::new(&ring, &points)?;
        let start = Instant::now();
        let (values, eval_muls) = count_muls(|| ring.multipoint_eval(&f, &tree));
        let multipoint_ns = nanos(start);
        let start = Instant::now();
        let (back, interp_muls) = count_muls(|| ring.interpolate(&points, &values));
        let interpolate_ns = nanos(start);
        debug_assert_eq!(back?, f);
        let lg = (n as f64).log2();
        rows.push(vec![
            n.to_string(),
            eval_muls.to_string(),
            interp_muls.to_string(),
            format!("{:.4}", eval_muls as f64 / (n as f64 * lg * lg)),
            multipoint_ns,
            interpolate_ns,
        ]);
    }
    csv_text(&header, &rows)
}

fn circuits(args: &BenchArgs, sweep: &Sweep) -> Result<String, Failure> {
    let field = args.field.field()?;
    let seed = args
        .field
        .seed
        .as_deref()
        .map_or(DEFAULT_SEED, str::as_bytes);
    let mimc = MimcParams::from_seed(field, seed)?;
    let mut rows = Vec::new();
    let mut push = |shape: CircuitShape, name: &str, value: usize| {
        rows.push(TallyRow {
            kind: shape.kind(),
            param_name: name.to_string(),
            param_value: value as u64,
            tally: closed_form_tally(&shape),
        })
    };
    for x in sweep.values().filter(|&x| x >= 1) {
        if x >= CIRCUIT_WINDOW {
            let shape = CircuitShape::Naive {
                text_len: x,
                pattern_len: CIRCUIT_WINDOW,
                range_checks: false,
            };
            push(shape, "text_len", x);
        }
        let shape = CircuitShape::RabinKarp {
            public_hash_count: x,
            pattern_len: CIRCUIT_WINDOW,
        };
        push(shape, "public_hash_count", x);
        let shape = CircuitShape::Merkle {
            depth: x,
            mimc: mimc.clone(),
        };
        push(shape, "depth", x);
        // Shape of an absence certificate over x windows.
        let shape = CircuitShape::PolyIdentity {
            deg_a: x,
            deg_s: 0,
            deg_b: 1,
            deg_t: x - 1,
        };
        push(shape, "window_count", x);
    }
    let mut buf = Vec::new();
    write_tally_csv(&mut buf, &rows)?;
    Ok(String::from_utf8(buf).expect("CSV of ASCII fields"))
}
