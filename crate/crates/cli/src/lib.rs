//! Command-line front end: analyze tensors, emit zoo tensors, verify border
//! decompositions, maintain a border-rank ledger and turn bounds into
//! exponent estimates.

mod commands;
mod source;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::run;
pub use source::{load_tensor, zoo_tensor, Loaded, ZOO_NAMES};

/// Verification rejected a certificate.
pub const EXIT_REJECTED: i32 = 1;
/// Malformed input: bad files, bad parameters, unknown names.
pub const EXIT_MALFORMED: i32 = 2;
/// A lower bound exceeded an upper bound.
pub const EXIT_CONSISTENCY: i32 = 3;

pub const SEED_ENV: &str = "BORANK_SEED";

/// Maps an error to the process exit code.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<borank::Error>() {
        Some(borank::Error::Consistency(_)) => EXIT_CONSISTENCY,
        _ => EXIT_MALFORMED,
    }
}

#[derive(Debug, Parser)]
#[command(name = "borank", version, about = "Border-rank certificates for 3-way tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the lower-bound battery on a tensor.
    ///
    /// Exit codes: 0 success, 2 malformed input, 3 lower bound above a
    /// known upper bound.
    Analyze(AnalyzeArgs),
    /// Write a benchmark tensor as JSON.
    Zoo(ZooArgs),
    /// Check a border decomposition against a tensor. Exit code 1 when the
    /// decomposition does not converge to the tensor.
    VerifyDecomposition(VerifyArgs),
    /// Inspect or update a border-rank ledger.
    Ledger(LedgerArgs),
    /// Matrix multiplication exponent bounds from border-rank upper bounds.
    Omega(OmegaArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Tensor file, or `zoo:NAME[:PARAMS]` such as `zoo:matmul:2` or `zoo:small_cw:2`.
    pub tensor: String,
    /// Border rank to test against; defaults to the largest dimension.
    #[arg(long)]
    pub target_r: Option<usize>,
    /// Comma-separated methods: strassen, commutator, end-closed, 111, symlie, alg111, koszul.
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    /// `rational` or `prime:<p>`; defaults to the file's prime, else prime:2305843009213693951.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Largest Koszul degree; all feasible degrees by default.
    #[arg(long)]
    pub p_max: Option<usize>,
    /// Random samples for Strassen's equations and the commutator bound.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Random restrictions per Koszul flattening.
    #[arg(long, default_value_t = 3)]
    pub retries: usize,
    /// Recompute every FAIL over the rationals (needs a rational tensor).
    #[arg(long)]
    pub exact_recheck: bool,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    pub json: bool,
    /// Ledger to read upper bounds from and record the lower bound in.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// Tensor id in reports and the ledger; defaults to the file's name.
    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Args)]
pub struct ZooArgs {
    /// One of: matmul, unit, wstate, big_cw, small_cw, det3, perm3,
    /// truncated_poly, cw_algebra, split, structure.
    pub name: String,
    #[arg(long)]
    pub l: Option<usize>,
    /// For matmul the middle dimension; for unit and split the size.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Nilpotency order for truncated_poly.
    #[arg(long)]
    pub k: Option<usize>,
    /// Algebra table file for `structure`.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Output file; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Tensor file or `zoo:NAME[:PARAMS]`.
    pub tensor: String,
    /// Decomposition certificate file.
    pub certificate: PathBuf,
    /// Field to verify over; rational by default for rational tensors.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub id: Option<String>,
    /// Record the resulting upper bound here.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LedgerArgs {
    /// Ledger JSON file; created when missing.
    pub path: PathBuf,
    #[command(subcommand)]
    pub action: LedgerAction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Lower,
    Upper,
}

#[derive(Debug, Subcommand)]
pub enum LedgerAction {
    /// Print the facts, optionally for one tensor.
    Show {
        #[arg(long)]
        id: Option<String>,
    },
    /// Record a fact.
    Add {
        #[arg(long)]
        id: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        value: u64,
        #[arg(long)]
        provenance: String,
    },
    /// Register `product = left ⊠ right`.
    Product {
        #[arg(long)]
        product: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Register the Kronecker powers `base^2 … base^k`.
    Power {
        #[arg(long)]
        base: String,
        #[arg(long)]
        k: u32,
    },
    /// Propagate upper bounds through registered products.
    Close,
    /// Add the facts of analyze reports and close.
    Merge { reports: Vec<PathBuf> },
}

#[derive(Debug, Args)]
pub struct OmegaArgs {
    #[command(subcommand)]
    pub formula: OmegaFormula,
}

#[derive(Debug, Subcommand)]
pub enum OmegaFormula {
    /// ω ≤ log_n r from R̲(M⟨n⟩) ≤ r.
    Bini {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// ω ≤ log_q(4/27 · r^{3/k}) from R̲(T_cw,q^⊠k) ≤ r.
    Cw {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Upper bound; read from `--ledger`/`--id` when omitted.
        #[arg(long)]
        r: Option<u64>,
        /// Tag the result as the skew Coppersmith–Winograd formula.
        #[arg(long)]
        skew: bool,
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        id: Option<String>,
    },
}
