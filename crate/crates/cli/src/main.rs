//! `mxc`: command-line front end for matroid basis removal, polytope checks,
//! fiber-graph verification and exchange-sequence rewriting.
//!
//! Exit codes: 0 every check passed, 1 a property failed (the report carries
//! a witness), 2 input or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use matroid_exchange::fiber::{MoveMode, DEFAULT_FIBER_CAP};

mod commands;
mod input;

#[derive(Parser)]
#[command(name = "mxc", version, about = "Basis removal, exchange graphs and certified rewriting for matroids")]
struct Cli {
    /// Print and read element labels starting at 1 (files are always 0-based)
    #[arg(long, global = true)]
    one_based: bool,

    /// Largest number of tuples a fiber search may visit
    #[arg(long, global = true, default_value_t = DEFAULT_FIBER_CAP)]
    fiber_cap: usize,

    /// Write the verification report as JSON to this path
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,

    /// Seed for randomized audits
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Record wall-clock time per check (makes reports run-dependent)
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

/// Matroid arguments are `builtin:NAME` or a path to `{"n": .., "bases": [..]}`.
#[derive(Subcommand)]
enum Command {
    /// Check the basis exchange axiom and summarize the matroid
    Validate { matroid: String },
    /// List all circuits
    Circuits { matroid: String },
    /// Remove one basis, writing the resulting matroid
    RemoveBasis {
        matroid: String,
        #[arg(long)]
        basis: String,
        /// Write the reduced matroid here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the bases whose removal leaves a matroid
    Removable { matroid: String },
    /// Decide sparse paving; optionally emit the removal chain from the uniform matroid
    SparsePaving {
        matroid: String,
        /// Print the chain JSON
        #[arg(long)]
        chain: bool,
    },
    /// Replay a removal chain file `{"n", "r", "removed"}`
    ReplayChain { chain: PathBuf },
    /// Matroid of the columns of a matrix file (header `r n`, then rows)
    FromMatrix {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Base polytope checks
    Polytope {
        matroid: String,
        #[command(subcommand)]
        check: PolytopeCheck,
    },
    /// Fiber-graph connectivity in degrees 2..=K
    White {
        matroid: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value = "strong")]
        mode: MoveMode,
    },
    /// Rewrite exchange sequences through a removed basis
    Rewrite {
        #[command(subcommand)]
        kind: RewriteKind,
    },
    /// Replay a certificate `{"start", "steps"}` in a matroid
    VerifyCert {
        matroid: String,
        cert: PathBuf,
        /// Expected end tuple as sets separated by `;`
        #[arg(long)]
        end: Option<String>,
    },
    /// Read a catalog of compact strings, one matroid per line
    Ingest {
        catalog: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Write the accepted matroids as a JSON array
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit the rewriting constructions on generated instances
    Audit {
        matroid: String,
        #[arg(long)]
        b: String,
        /// quadratic, type-b, single-b, push-down, lift or all
        #[arg(long, default_value = "all")]
        check: String,
        /// Audit exhaustively when there are at most this many instances
        #[arg(long, default_value_t = 100_000)]
        exhaustive_limit: usize,
        /// Sample size otherwise
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Degree of the lifted relations
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
}

#[derive(Subcommand)]
enum PolytopeCheck {
    /// Compare exchange edges with LP-certified geometric edges
    Edges {
        /// Also write the edge graph in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check every edge is parallel to some e_i - e_j
    Ggms {
        /// Drop this vertex first
        #[arg(long)]
        without: Option<String>,
    },
    /// Cut the polytope below the vertex of a basis
    Cut {
        #[arg(long)]
        basis: String,
    },
}

#[derive(Subcommand)]
enum RewriteKind {
    /// b1 b2 -> b b2p -> b1p b2pp, rewritten in M_b
    Quadratic {
        matroid: String,
        b: String,
        #[arg(num_args = 5, value_names = ["B1", "B2", "B2P", "B1P", "B2PP"])]
        bases: Vec<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// b b1 b2 = b b1p b2p without type-b steps
    TypeB {
        matroid: String,
        b: String,
        #[arg(num_args = 4, value_names = ["B1", "B2", "B1P", "B2P"])]
        bases: Vec<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// b1 b2 b3 -> b b2p b3 -> b1p b2pp b3p, rewritten in M_b
    SingleB {
        matroid: String,
        b: String,
        #[arg(num_args = 7, value_names = ["B1", "B2", "B3", "B2P", "B1P", "B2PP", "B3P"])]
        bases: Vec<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Lift a relation of M_b along a sequence in M (found by search if omitted)
    Lift {
        matroid: String,
        b: String,
        relation: PathBuf,
        #[arg(long)]
        hint: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Sequence in M for a relation of M, routed through M_b
    PushDown {
        matroid: String,
        b: String,
        relation: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
