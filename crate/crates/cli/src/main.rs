//! `zkmatch`: substring matching, Merkle commitments, membership proofs,
//! polynomial certificates and benchmark sweeps from the command line.
//!
//! Exit codes: 0 success, 1 no match (with --fail-on-absent) or invalid
//! artifact, 2 usage or input error, 3 nothing to commit, 4 pattern cannot be
//! proven, 5 parameter fingerprint mismatch.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use zkmatch_core::artifact::ConfigEcho;
use zkmatch_core::{Error, PrimeField};

#[derive(Parser, Debug)]
#[command(
    name = "zkmatch",
    version,
    about = "Private substring matching toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search a corpus for patterns and print a JSON report.
    Match(MatchArgs),
    /// Commit to the legal windows of a corpus with a MiMC Merkle tree.
    Commit(CommitArgs),
    /// Produce a membership proof or a polynomial certificate.
    Prove(ProveArgs),
    /// Check a proof or certificate without the corpus.
    Verify(VerifyArgs),
    /// Run a parameter sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FieldArgs {
    /// Prime field modulus [default: 2^64 - 2^32 + 1]
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Rolling hash base [default: 257]
    #[arg(long)]
    pub base: Option<u64>,
    /// MiMC constant seed; for certificates, the challenge seed
    #[arg(long)]
    pub seed: Option<String>,
}

impl FieldArgs {
    pub fn field(&self) -> Result<PrimeField, Failure> {
        match self.modulus {
            Some(m) => Ok(PrimeField::new(m)?),
            None => Ok(PrimeField::goldilocks()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Naive,
    RabinKarp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Merkle,
    PolyContain,
    PolyAbsent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Naive,
    RabinKarp,
    Merkle,
    Poly,
    Circuits,
}

#[derive(Args, Debug, Serialize)]
pub struct MatchArgs {
    /// Directory (one document per file) or file (one document per line)
    #[arg(long)]
    pub corpus: PathBuf,
    /// File with one pattern per line
    #[arg(long, conflicts_with = "pattern", required_unless_present = "pattern")]
    pub patterns: Option<PathBuf>,
    /// A single pattern; `\xNN` and `\\` escapes are decoded
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long, value_enum, default_value = "rabin-karp")]
    pub algo: Algo,
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    /// Output path [default: stdout]
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Exit with 1 when nothing matched
    #[arg(long)]
    pub fail_on_absent: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CommitArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub window_len: usize,
    /// Alphabet policy: url, printable or any
    #[arg(long, default_value = "printable")]
    pub policy: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ProveArgs {
    #[arg(long, value_enum, default_value = "merkle")]
    pub mode: Mode,
    #[arg(long)]
    pub pattern: String,
    /// The prover's private corpus
    #[arg(long)]
    pub corpus: PathBuf,
    /// Commitment to prove against (merkle mode); its parameters take precedence
    #[arg(long)]
    pub commitment: Option<PathBuf>,
    /// Window length [default: pattern length]
    #[arg(long)]
    pub window_len: Option<usize>,
    /// Alphabet policy [default: printable]
    #[arg(long)]
    pub policy: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Proof or certificate file
    #[arg(long)]
    pub artifact: PathBuf,
    /// Public commitment the proof must match
    #[arg(long)]
    pub commitment: Option<PathBuf>,
    /// Expected pattern; checked against the artifact when given
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    pub window_len: Option<usize>,
    #[arg(long)]
    pub policy: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Inclusive range min:max:step of the swept parameter
    #[arg(long)]
    pub sweep: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// An error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotMember | Error::NotContained | Error::IsContained => 4,
            Error::Build(_) => 3,
            Error::Config(_) | Error::Input(_) | Error::Domain(_) | Error::Unsupported(_) => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(2, e.to_string())
    }
}

/// Flags as given, with unset options and the output path left out.
pub fn echo<T: Serialize>(args: &T) -> ConfigEcho {
    let serde_json::Value::Object(map) = serde_json::to_value(args).expect("flags serialize")
    else {
        return ConfigEcho::new();
    };
    map.into_iter()
        .filter(|(_, v)| !v.is_null())
        .map(|(k, v)| {
            let v = match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            (k.replace('_', "-"), v)
        })
        .collect()
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ZKMATCH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::new(
            2,
            format!("ZKMATCH_THREADS must be a positive integer, got {raw:?}"),
        )
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::new(2, format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    init_threads()?;
    match cli.command {
        Command::Match(a) => commands::cmd_match(&a),
        Command::Commit(a) => commands::cmd_commit(&a),
        Command::Prove(a) => commands::cmd_prove(&a),
        Command::Verify(a) => commands::cmd_verify(&a),
        Command::Bench(a) => bench::cmd_bench(&a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("zkmatch: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
