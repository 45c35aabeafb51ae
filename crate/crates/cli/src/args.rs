use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::format::Format;

#[derive(Debug, Parser)]
#[command(
    name = "etorus",
    version,
    about = "Discrete E-transforms on tori of classical simple Lie groups"
)]
pub struct Cli {
    /// Worker threads (falls back to ETORUS_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

/// Family, rank, level and the reflection index `j`. Family and rank may
/// be given positionally (`C 2`) or as flags.
#[derive(Debug, Clone, Default, Args)]
pub struct TypeArgs {
    /// Family: A, B, C or D.
    #[arg(value_name = "FAMILY")]
    pub family_pos: Option<String>,

    /// Rank n.
    #[arg(value_name = "RANK", allow_negative_numbers = true)]
    pub rank_pos: Option<i64>,

    /// Same as FAMILY.
    #[arg(long)]
    pub family: Option<String>,

    /// Same as RANK.
    #[arg(long, allow_negative_numbers = true)]
    pub rank: Option<i64>,

    /// Grid level M.
    #[arg(
        short = 'M',
        long = "M",
        value_name = "M",
        allow_negative_numbers = true
    )]
    pub level: Option<i64>,

    /// Simple reflection r_j used for the interior copy of the domain.
    #[arg(long)]
    pub j: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Points,
    Weights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the root-system data of a type.
    Info {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// List the point grid F^e_M or the weight grid Lambda^e_M.
    Grid {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Forward transform of a samples file or inverse of a coefficients file.
    Transform {
        #[arg(value_enum)]
        direction: Direction,
        #[command(flatten)]
        ty: TypeArgs,
        /// Input file (CSV or JSON, chosen by --format or the extension).
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Sample the interpolant of a coefficients file on a mesh or a point list.
    Eval {
        #[command(flatten)]
        ty: TypeArgs,
        /// Input file (CSV or JSON, chosen by --format or the extension).
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Mesh points per axis.
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        /// CSV of real coweight coordinates y1..yn (one point per row).
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the invariant checks for one grid.
    Verify {
        #[command(flatten)]
        ty: TypeArgs,
        /// Seed for the random test vectors.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random vectors for the round-trip and Plancherel checks.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}
