//! `gamevalues`: values and certified bounds for unique games from the
//! command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "gamevalues", version, about = "Values and certified bounds for unique games")]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true, env = "GAMEVALUES_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct GameArgs {
    /// Named generator (`chsh:3`, `cycle:5`, `commutator:S3`) or a path to
    /// game JSON, digraph JSON or an arc list.
    #[arg(long)]
    game: String,

    /// JSON file `{"pi": [[...], ...]}` replacing the game's density.
    #[arg(long)]
    density: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// ADMM stopping tolerance.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,

    /// ADMM iteration cap.
    #[arg(long, default_value_t = 50_000)]
    max_iters: usize,

    /// Random restarts for the q1 searches.
    #[arg(long, default_value_t = 20)]
    restarts: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Local dimension for the q1 searches (default: every d in 1..=k for
    /// q1, d = k for q1-bipartite).
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one report per requested value kind.
    Value {
        #[command(flatten)]
        game: GameArgs,

        /// Comma-separated: det, det-sync, vect, vect-sync, q1, q1-bipartite, qc-upper.
        #[arg(long, value_delimiter = ',', required = true)]
        kind: Vec<commands::Kind>,

        #[command(flatten)]
        solver: SolverArgs,

        /// Attach the Gram matrix to vect reports as a certificate.
        #[arg(long)]
        emit_gram: bool,
    },
    /// Decide whether a perfect synchronous deterministic strategy exists.
    PerfectCheck {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Directed cut number of a digraph game.
    Dcut {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Solve the vect program and round the solution to a deterministic strategy.
    Round {
        #[command(flatten)]
        game: GameArgs,

        /// Use the synchronous program (square games only).
        #[arg(long)]
        sync: bool,

        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Recompute a report's value from its certificate.
    VerifyCertificate {
        /// A single report, or a `value` output with a `reports` list.
        path: PathBuf,
    },
    /// Run the acceptance table.
    Reproduce {
        /// Comma-separated row ids (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_INVALID);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    let result = match cli.command {
        Command::Value { game, kind, solver, emit_gram } => commands::value(&game, &kind, &solver, emit_gram),
        Command::PerfectCheck { game } => commands::perfect_check(&game),
        Command::Dcut { game } => commands::dcut(&game),
        Command::Round { game, sync, solver } => commands::round(&game, sync, &solver),
        Command::VerifyCertificate { path } => commands::verify(&path),
        Command::Reproduce { only } => commands::reproduce(&only),
    };
    match result {
        Ok(out) => match output::render(&out.body, cli.format) {
            Ok(text) => {
                print!("{text}");
                ExitCode::from(out.code)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INVALID)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
