//! `fermiconc`: generate fermionic states and report their entanglement.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use report::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "fermiconc",
    version,
    about = "Entanglement measures for pure states of identical fermions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a state file to standard output.
    Gen(GenArgs),
    /// Purities, bipartition verdicts and the multipartite concurrence.
    Concurrence(ConcurrenceArgs),
    /// Expectation value of a two-copy observable on identical copies.
    Twocopy(TwocopyArgs),
    /// Diagonal identities for one state, or a seeded purity-bound campaign.
    Verify(VerifyArgs),
    /// Two-copy concurrence with a slightly mismatched second copy.
    Sensitivity(SensitivityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Slater,
    Fghz,
    Random,
    RandomSlater,
}

#[derive(Debug, Args)]
struct GenArgs {
    kind: Kind,
    /// Number of modes.
    #[arg(long)]
    d: Option<usize>,
    /// Number of particles.
    #[arg(long)]
    n: Option<usize>,
    /// Occupied modes for `slater`, 1-based and comma separated.
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct Input {
    /// State file in occupation-v1 format, or `-` for standard input.
    file: String,
    /// Rescale inputs whose norm is off by up to 1e-2.
    #[arg(long)]
    renormalize: bool,
}

#[derive(Debug, Args)]
struct ConcurrenceArgs {
    #[command(flatten)]
    input: Input,
    /// Purity gap below which a bipartition is reported separable.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Observable {
    Af,
    Afprime,
    Atilde,
    A,
    Onm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
struct TwocopyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    observable: Observable,
    /// Subsystem size for `onm`.
    #[arg(long)]
    m: Option<usize>,
    /// Projector used to build the swap observables.
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// State file to check; omit when running a campaign.
    file: Option<String>,
    #[arg(long)]
    renormalize: bool,
    /// Random campaign at shape `N,d`.
    #[arg(long)]
    campaign: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Report,
    Csv,
}

#[derive(Debug, Args)]
struct SensitivityArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 1e-3)]
    eps_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    eps_max: f64,
    #[arg(long, default_value_t = 9)]
    points: usize,
    /// Seed of the random mismatch direction.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "report")]
    format: Format,
}

fn run(cli: Cli, argv: &[String]) -> Result<String, (Option<String>, Failure)> {
    match cli.command {
        Command::Gen(a) => commands::gen(&a).map_err(|f| (None, f)),
        Command::Concurrence(a) => commands::concurrence(&a, argv),
        Command::Twocopy(a) => commands::twocopy(&a, argv).map_err(|f| (None, f)),
        Command::Verify(a) => commands::verify(&a, argv),
        Command::Sensitivity(a) => commands::sensitivity(&a, argv).map_err(|f| (None, f)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(cli, &argv) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, failure)) => {
            // reports of failed checks still go to standard output
            if let Some(out) = out {
                print!("{out}");
            }
            if !matches!(failure, Failure::Verification(None)) {
                eprintln!("fermiconc: {failure}");
            }
            failure.exit_code()
        }
    }
}
