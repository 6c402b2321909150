mod bounds;
mod game;
mod gen;
mod io;
mod sequenceable;
mod sequencing;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::{CmdResult, ExitContext};

/// Build, sequence and verify block-avoiding orderings of combinatorial designs.
#[derive(Parser, Debug)]
#[command(name = "seqdesign", version)]
struct Cli {
    /// Worker threads for parallel searches and verifiers.
    #[arg(long, global = true, env = "SEQDESIGN_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a design (and its built-in sequencing where there is one).
    Gen(GenArgs),
    /// Run a sequencing engine on a design.
    Sequence(SequenceArgs),
    /// Check that a sequencing is ell-good (exit 1 on a violation).
    Verify(VerifyArgs),
    /// Largest ell for which a sequencing is good.
    Maxell(MaxellArgs),
    /// Upper bounds on ell.
    Bounds(BoundsArgs),
    /// Sequencings with no segment equal to a union of disjoint blocks.
    Sequenceable(SequenceableArgs),
    /// The avoidance game on a Hamming triple system.
    Game(GameArgs),
    /// Exhaustive search for good sequencings on small designs.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    what: GenKind,

    /// Output file for the design, `-` for stdout.
    #[arg(short, long, global = true, default_value = "-")]
    output: PathBuf,

    /// Also write the construction's sequencing to this file.
    #[arg(long, global = true)]
    seq_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// STS(6m+1) from O'Keefe's Skolem pairs, m = 2 (mod 4).
    SkolemSts {
        #[arg(long)]
        m: usize,
    },
    /// STS(2^r - 1) from the weight-3 Hamming codewords.
    Hamming {
        #[arg(long)]
        r: usize,
    },
    /// SQS(2^r) of 4-sets with zero XOR.
    BooleanSqs {
        #[arg(long)]
        r: usize,
    },
    /// SQS(4m) from an SQS(m) design file.
    SqsQuadruple {
        #[arg(long)]
        base: PathBuf,
    },
    /// The identity sequencing on n points (written to --output).
    Natural {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Naive,
    Staged,
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Tie {
    Min,
    Random,
}

#[derive(Args, Debug)]
struct SequenceArgs {
    #[arg(long)]
    design: PathBuf,
    #[arg(long)]
    ell: usize,
    #[arg(long, value_enum, default_value = "staged")]
    algo: Algo,
    #[arg(long, value_enum, default_value = "min")]
    tie: Tie,
    /// Seed for `--tie random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refuse to run when n is below the engine's threshold.
    #[arg(long)]
    strict: bool,
    /// With `--algo naive`, also keep the wrap-around windows good.
    #[arg(long)]
    cyclic: bool,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    design: PathBuf,
    #[arg(long)]
    seq: PathBuf,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    cyclic: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct MaxellArgs {
    #[arg(long)]
    design: PathBuf,
    #[arg(long)]
    seq: PathBuf,
    #[arg(long)]
    cyclic: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(subcommand)]
    mode: BoundsMode,
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum BoundsMode {
    /// Classical counting bound for STS(n).
    Sv {
        #[arg(long)]
        n: u64,
    },
    /// Intersection-count bound for designs with block size t+1; with
    /// `--ell`, print the solved counts instead.
    SvGeneral {
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Pair-gap bound for S_lambda(t, k, n).
    Easy {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
        #[arg(long)]
        n: u64,
    },
    /// Root of the quadruple-system polynomial in [0, 0.45].
    SqsRoot,
    /// The cyclic STS linear program.
    Lp {
        #[arg(long, default_value_t = 0.1645)]
        delta: f64,
        #[arg(long, default_value_t = 0.013)]
        eps: f64,
        /// Use delta = alpha/2, eps = 1 - 3 alpha and report the margin.
        #[arg(long, conflicts_with_all = ["delta", "eps"])]
        alpha: Option<f64>,
    },
    /// Segment profile counts and their identities on a cyclic sequencing.
    Profiles(ProfilesArgs),
}

#[derive(Args, Debug)]
struct ProfilesArgs {
    /// Use the Skolem STS(6m+1) with its natural sequencing.
    #[arg(long, conflicts_with_all = ["design", "seq"])]
    m: Option<usize>,
    #[arg(long, requires = "seq")]
    design: Option<PathBuf>,
    #[arg(long, requires = "design")]
    seq: Option<PathBuf>,
    #[arg(long)]
    delta: usize,
    /// Defaults to n - 6 delta.
    #[arg(long)]
    eps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    shift: usize,
    /// Also sum over all shifts and check the shift equalities.
    #[arg(long)]
    all_shifts: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("action").required(true).args(["construct", "check"]))]
struct SequenceableArgs {
    #[arg(long)]
    design: PathBuf,
    /// Build a sequencing and verify it.
    #[arg(long)]
    construct: bool,
    /// Verify the sequencing in this file.
    #[arg(long, value_name = "SEQFILE")]
    check: Option<PathBuf>,
    /// Where to write the constructed sequencing.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GameSystem {
    Hamming,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GameMode {
    Interactive,
    Random,
    Exhaustive,
}

#[derive(Args, Debug)]
struct GameArgs {
    #[arg(long, value_enum, default_value = "hamming")]
    system: GameSystem,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, value_enum, default_value = "interactive")]
    mode: GameMode,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("goal").required(true).args(["ell", "max_ell"]))]
struct OracleArgs {
    #[arg(long)]
    design: PathBuf,
    /// Find an ell-good sequencing.
    #[arg(long)]
    ell: Option<usize>,
    /// Find the largest ell with a good sequencing.
    #[arg(long)]
    max_ell: bool,
    #[arg(long)]
    cyclic: bool,
    /// Largest n the search accepts.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
    #[arg(long)]
    json: bool,
}

fn run(cli: Cli) -> CmdResult {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().usage()?;
    }
    match cli.command {
        Command::Gen(a) => gen::run(a),
        Command::Sequence(a) => sequencing::sequence(a),
        Command::Verify(a) => sequencing::verify(a),
        Command::Maxell(a) => sequencing::maxell(a),
        Command::Bounds(a) => bounds::run(a),
        Command::Sequenceable(a) => sequenceable::run(a),
        Command::Game(a) => game::run(a),
        Command::Oracle(a) => sequencing::oracle(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { io::USAGE } else { io::OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
