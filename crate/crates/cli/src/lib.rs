//! Command-line front end for `zakfiber`: scenario files in, JSON or CSV
//! reports out.
//!
//! Exit codes: 0 ok, 2 validation failure, 3 oracle disagreement, 4 I/O or
//! parse error.

pub mod commands;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, Op, TranslationOp, DEFAULT_TOLERANCE};
pub use report::{Report, Status};
pub use scenario::{parse_scenario, parse_scenario_str, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) | CliError::Parse(_) => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Structured,
    CsvFibers,
}

#[derive(Clone, Debug, Args)]
pub struct Flags {
    /// Scenario file (JSON, schema_version 1).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Rank tolerance relative to the largest fiber singular value; also the
    /// Parseval verdict slack.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    pub format: Format,
    /// Worker threads for per-fiber work.
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
}

#[derive(Clone, Debug, Args)]
pub struct BracketArgs {
    #[command(flatten)]
    pub flags: Flags,
    /// Index of the generator whose bracket is reported.
    #[arg(long, default_value_t = 0)]
    pub generator: usize,
}

#[derive(Clone, Debug, Subcommand)]
pub enum TranslationCommand {
    /// Weil formula on every generator and probe.
    Weil(Flags),
    /// Zak transform over Omega x C.
    Zak(Flags),
    /// Fiberization over the annihilator.
    Fiberize(Flags),
    /// Zak/fiberization duality and the Gramian identity.
    Duality(Flags),
    /// Range function and bounds of the translation-invariant system.
    Analyze(Flags),
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Check the action axioms and freeness.
    Validate(Flags),
    /// Zak transforms of the generators.
    Zak(Flags),
    /// Fiber dimensions of the generated subspace.
    Range(Flags),
    /// Length of the generated subspace.
    Length(Flags),
    /// Membership of each probe in the generated subspace.
    Member(Flags),
    /// Optimal frame bounds.
    Frame(Flags),
    /// Riesz verdict and bounds.
    Riesz(Flags),
    /// Bracket function and single-orbit bounds of one generator.
    Bracket(BracketArgs),
    /// Parseval decomposition of the generated subspace.
    Decompose(Flags),
    /// Subgroup-translation commands.
    #[command(subcommand)]
    Translation(TranslationCommand),
    /// Cross-check fiber computations against the dense oracle.
    Verify(Flags),
}

impl Command {
    pub fn split(&self) -> (Op, &Flags) {
        match self {
            Command::Validate(f) => (Op::Validate, f),
            Command::Zak(f) => (Op::Zak, f),
            Command::Range(f) => (Op::Range, f),
            Command::Length(f) => (Op::Length, f),
            Command::Member(f) => (Op::Member, f),
            Command::Frame(f) => (Op::Frame, f),
            Command::Riesz(f) => (Op::Riesz, f),
            Command::Bracket(b) => (Op::Bracket { generator: b.generator }, &b.flags),
            Command::Decompose(f) => (Op::Decompose, f),
            Command::Verify(f) => (Op::Verify, f),
            Command::Translation(t) => match t {
                TranslationCommand::Weil(f) => (Op::Translation(TranslationOp::Weil), f),
                TranslationCommand::Zak(f) => (Op::Translation(TranslationOp::Zak), f),
                TranslationCommand::Fiberize(f) => (Op::Translation(TranslationOp::Fiberize), f),
                TranslationCommand::Duality(f) => (Op::Translation(TranslationOp::Duality), f),
                TranslationCommand::Analyze(f) => (Op::Translation(TranslationOp::Analyze), f),
            },
        }
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "zakfiber", version, about = "Zak transforms and fiberwise frame theory for finite abelian group actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Output text and exit status for a parsed command line.
pub struct Outcome {
    pub output: String,
    pub status: Status,
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let (op, flags) = cli.command.split();
    if flags.parallel == 0 {
        return Err(CliError::Validation("--parallel must be at least 1".into()));
    }
    let scenario = parse_scenario(&flags.scenario)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(flags.parallel)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let report = pool.install(|| run(op, &scenario, flags.tolerance))?;
    let output = match flags.format {
        Format::Structured => report.to_json(),
        Format::CsvFibers => report.to_csv(),
    };
    Ok(Outcome { output, status: report.status })
}
