//! `diulab`: generate hard instances, run backends with probe reports, play
//! the communication game and audit probe logs.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "diulab", version, about)]
struct Cli {
    /// Directory for outputs whose path is not given explicitly.
    #[arg(long, global = true, env = "DIULAB_OUT", default_value = ".")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a trace (JSONL) or a rectangle set (CSV).
    Gen(GenArgs),
    /// Run a trace on a backend; write answers and probe statistics.
    Run(RunArgs),
    /// Area of a union of rectangles by a sweep over an interval-union backend.
    Klee(KleeArgs),
    /// Play the Merlin-assisted game on a split of a hard trace.
    Commgame(GameArgs),
    /// Check the probe-counting identities on a probe log.
    Audit(AuditArgs),
    /// Run or measure the sparse set disjointness protocol.
    Disjointness(DisjArgs),
    /// Cross-check backends on random traces.
    Fuzz(FuzzArgs),
    /// Mean segment-tree probes per update for n = 2^min .. 2^max.
    Scaling(ScalingArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Bps,
    Diu,
    Interval,
    Ps,
    Rects,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long = "B")]
    b: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Number of operations (interval, ps) or rectangles (rects).
    #[arg(long, default_value_t = 1000)]
    len: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceSizes {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long = "B")]
    b: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 64)]
    w: u32,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, default_value = "segment_tree")]
    backend: String,
    #[command(flatten)]
    sizes: TraceSizes,
    #[arg(long)]
    answers: Option<PathBuf>,
    /// Per-operation probe counts (CSV).
    #[arg(long)]
    probes: Option<PathBuf>,
    /// Probe totals per operation kind (CSV).
    #[arg(long)]
    aggregate: Option<PathBuf>,
    /// Raw probe log (CSV), the input of `audit`.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct KleeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value = "segment_tree")]
    backend: String,
    /// Write insert/delete/query counts and probes as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Also compute the area by painting a grid and compare.
    #[arg(long)]
    check_oracle: bool,
}

#[derive(Args)]
struct GameArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Binary label `s`; the game splits `I_s` into `I_s0 | I_s1`. Use `-` for the empty label.
    #[arg(long, allow_hyphen_values = true)]
    split: String,
    #[arg(long, default_value = "segment_tree")]
    backend: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 64)]
    w: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tamper with Merlin's message: flip:k, truncate:k or extend:k.
    #[arg(long)]
    corrupt: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ledger against the cost bound (CSV).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    log: PathBuf,
    /// Number of updates in the hard trace (a power of two).
    #[arg(long = "B")]
    b: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DisjArgs {
    #[arg(long)]
    seed: u64,
    /// Explicit first set, comma separated.
    #[arg(long, requires = "t")]
    s: Option<String>,
    /// Explicit second set, comma separated.
    #[arg(long, requires = "s")]
    t: Option<String>,
    /// Set sizes to measure on random disjoint pairs.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512,1024")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 64)]
    universe_bits: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzFamily {
    Interval,
    Bps,
    Ps,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "interval")]
    family: FuzzFamily,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 32)]
    n: u64,
    #[arg(long, default_value_t = 200)]
    len: usize,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    min_exp: u32,
    #[arg(long, default_value_t = 20)]
    max_exp: u32,
    #[arg(long, default_value_t = 2000)]
    ops: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = io::Ctx { out_dir: cli.out_dir };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&ctx, a),
        Command::Run(a) => commands::run(&ctx, a),
        Command::Klee(a) => commands::klee(&ctx, a),
        Command::Commgame(a) => commands::commgame(&ctx, a),
        Command::Audit(a) => commands::audit(&ctx, a),
        Command::Disjointness(a) => commands::disjointness(&ctx, a),
        Command::Fuzz(a) => commands::fuzz(&ctx, a),
        Command::Scaling(a) => commands::scaling(&ctx, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
