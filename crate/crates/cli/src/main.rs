mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "pba", version, about = "Probabilistic Büchi automata toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TranslateMode {
    Pos2nba,
    #[value(name = "as2dba-all")]
    As2dbaAll,
    #[value(name = "as2dba-flat")]
    As2dbaFlat,
    Th2gnba,
    Degen,
    Pca2pwa,
    Parity2ldba,
    Ldba2pba,
    Dba2pba,
    Pos2th,
    #[value(name = "complement-pwa")]
    ComplementPwa,
    #[value(name = "pfa2pwa-value1")]
    Pfa2pwaValue1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Empty,
    #[value(name = "nonuniversal-as")]
    NonuniversalAs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AsMode {
    /// Rejecting runs avoiding F (no IDA_F pattern).
    #[value(name = "all-runs")]
    AllRuns,
    /// Limit-deterministic rejecting runs (no EDA pattern).
    Flat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GadgetKind {
    #[value(name = "fig-a")]
    FigA,
    #[value(name = "p-lambda")]
    PLambda,
    #[value(name = "p-tilde-lambda")]
    PTildeLambda,
}

#[derive(clap::Args, Debug)]
pub struct WordArgs {
    /// Comma-separated prefix symbols.
    #[arg(long, default_value = "")]
    prefix: String,
    /// Comma-separated period symbols.
    #[arg(long)]
    period: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report ambiguity patterns, class and structural flags.
    Classify { input: PathBuf },
    /// Apply a construction and write the result.
    Translate {
        #[arg(long, value_enum)]
        mode: TranslateMode,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Skip the finite-ambiguity check of th2gnba.
        #[arg(long)]
        force: bool,
        input: PathBuf,
        output: PathBuf,
    },
    /// Exact acceptance probability of a word.
    Prob {
        input: PathBuf,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Membership of an ultimately periodic word in a nondeterministic automaton.
    Member {
        input: PathBuf,
        #[command(flatten)]
        word: WordArgs,
    },
    /// Emptiness or almost-sure non-universality with a witness word.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<AsMode>,
    },
    /// Reachable supports of the state distribution.
    Supports { input: PathBuf },
    /// Value sets and the ε-ladder of the threshold construction.
    Epsilon {
        input: PathBuf,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        k: usize,
    },
    /// Monte Carlo estimate of the acceptance probability.
    Sample {
        input: PathBuf,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value_t = 100_000)]
        runs: usize,
        #[arg(long, default_value_t = 500)]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write one of the example automata.
    Gadget {
        #[arg(value_enum)]
        kind: GadgetKind,
        #[arg(long)]
        lambda: Option<String>,
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Classify { input } => commands::classify(&input),
        Command::Translate { mode, lambda, k, force, input, output } => {
            commands::translate(mode, lambda.as_deref(), k, force, &input, &output)
        }
        Command::Prob { input, word } => commands::prob(&input, &word.prefix, word.period.as_deref()),
        Command::Member { input, word } => commands::member(&input, &word.prefix, word.period.as_deref()),
        Command::Check { kind, input, mode } => commands::check(kind, &input, mode),
        Command::Supports { input } => commands::supports(&input),
        Command::Epsilon { input, lambda, k } => commands::epsilon(&input, &lambda, k),
        Command::Sample { input, word, runs, horizon, seed } => {
            commands::sample(&input, &word.prefix, word.period.as_deref(), runs, horizon, seed)
        }
        Command::Gadget { kind, lambda, output } => commands::gadget(kind, lambda.as_deref(), &output),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
