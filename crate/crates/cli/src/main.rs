use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(
    name = "nielsen",
    version,
    about = "Nielsen and Andrews-Curtis equivalence of generating tuples"
)]
struct Cli {
    /// Worker threads for graph exploration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write the JSON (or DOT) document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Nielsen,
    Ac,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Dot,
    Json,
}

#[derive(Args, Clone)]
pub struct GroupArg {
    /// Group spec JSON file, or `builtin:NAME` (Q8, Z5, Z2xZ4, D4, S4, A4, H1, H1_3, F2_3, ...).
    #[arg(long)]
    pub group: String,
}

#[derive(Args, Clone)]
pub struct GraphArgs {
    #[command(flatten)]
    pub group: GroupArg,
    /// Tuple length.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "nielsen")]
    pub mode: ModeArg,
    /// AC conjugator set, `;`-separated elements (default: the whole group).
    #[arg(long, allow_hyphen_values = true)]
    pub conjugators: Option<String>,
    /// Largest number of candidate tuples to explore.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Clone)]
pub struct TupleArg {
    /// Tuple literal, entries separated by `;`: labels or coordinates like `(1,0,5)`.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "words",
        required_unless_present = "words"
    )]
    pub tuple: Option<String>,
    /// Tuple given as words over the distinguished generators, e.g. `x1*x2;x2^-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub words: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Connected components of the Nielsen or AC graph.
    Components(GraphArgs),
    /// Shortest move sequence between two tuples.
    Path {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Constructive certificate to the canonical tuple (Nielsen) or basis pair (AC).
    Certify {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum, default_value = "nielsen")]
        mode: ModeArg,
        #[command(flatten)]
        tuple: TupleArg,
        /// Target basis pair for AC normalization (default: distinguished generators).
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
    },
    /// Canonical form of a tuple with its Nielsen certificate.
    Canonicalize {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        tuple: TupleArg,
    },
    /// Predicted number of components of the abelianization's Nielsen graph.
    Predict {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
    },
    /// Verification harnesses and certificate checking.
    Verify {
        /// Certificate JSON file to replay.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[command(subcommand)]
        check: Option<VerifyCommand>,
    },
    /// Write the graph as DOT or JSON.
    Export {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "dot")]
        format: FormatArg,
    },
    /// Structural summary of a group.
    Inspect {
        #[command(flatten)]
        group: GroupArg,
    },
}

#[derive(Subcommand)]
pub enum VerifyCommand {
    /// Components of the AC graph are the preimages of the abelian ones.
    Preimage {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Explored component count against the invariant-factor prediction.
    AbelianCount {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
    },
    /// Class C against nilpotency over the built-in finite corpus.
    Corpus,
    /// Replay a certificate file.
    Certificate {
        #[arg(long)]
        certificate: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = commands::CliError::usage(e.to_string().trim_end());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    let ctx = commands::Context {
        workers: cli.workers,
    };
    let result = match cli.command {
        Command::Components(g) => commands::components(&ctx, &g),
        Command::Path { graph, from, to } => commands::path(&ctx, &graph, &from, &to),
        Command::Certify {
            group,
            mode,
            tuple,
            basis,
        } => commands::certify(&group, mode, &tuple, basis.as_deref()),
        Command::Canonicalize { group, tuple } => commands::canonicalize(&group, &tuple),
        Command::Predict { group, n } => commands::predict(&group, n),
        Command::Verify { certificate, check } => match (certificate, check) {
            (Some(path), None) | (None, Some(VerifyCommand::Certificate { certificate: path })) => {
                commands::verify_certificate(&path)
            }
            (None, Some(c)) => commands::verify(&ctx, c),
            (Some(_), Some(_)) => Err(commands::CliError::usage(
                "--certificate cannot be combined with a verify subcommand",
            )),
            (None, None) => Err(commands::CliError::usage(
                "verify needs --certificate or a subcommand",
            )),
        },
        Command::Export { graph, format } => commands::export(&ctx, &graph, format),
        Command::Inspect { group } => commands::inspect(&group),
    };
    match result.and_then(|doc| commands::emit(&doc, cli.output.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
