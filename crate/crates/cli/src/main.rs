//! `lrc`: construct, transform and verify locally repairable codes.
//!
//! Exit status: 0 success, 1 error, 2 a verification that ran and failed,
//! 64 bad usage.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lrc::code::Budget;
use lrc::simulate::ErasureModel;

mod commands;
mod report;

use report::{Format, Report};

const EXIT_ERROR: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "lrc",
    version,
    about = "Locally repairable codes: construct, transform, verify"
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write produced files as PREFIX.code, PREFIX.loc, PREFIX.quc and the
    /// report as PREFIX.json instead of inlining them.
    #[arg(long, global = true, value_name = "PREFIX")]
    out: Option<PathBuf>,

    /// Projective enumeration budget; defaults to LRC_BUDGET or 2^26.
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the distance bound for (n, k, r, δ).
    Bound(ParamArgs),
    /// Minimum distance of a code file.
    Mindist {
        code: PathBuf,
        /// Estimate from N random codewords instead (an upper bound).
        #[arg(long, value_name = "N")]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check (r, δ)-locality and classify the code against the bound.
    Verify {
        code: PathBuf,
        #[arg(long, required_unless_present = "discover")]
        locality: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
        /// Search for repair sets instead of reading them.
        #[arg(long, conflicts_with = "locality")]
        discover: bool,
        #[arg(long, default_value_t = 1_000_000)]
        work_cap: u64,
    },
    /// Build codes.
    #[command(subcommand)]
    Construct(Construct),
    /// Add one information symbol and one code symbol: (n+1, k+1, d, r+1, δ).
    Enlarge {
        code: PathBuf,
        #[arg(long)]
        locality: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Distance of the input; measured when omitted.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = lrc::transforms::DEFAULT_ENLARGE_SAMPLES)]
        samples: u64,
    },
    /// Shorten on one coordinate: (n-1, k-1, d' >= d).
    Puncture {
        code: PathBuf,
        #[arg(long)]
        locality: PathBuf,
        /// 1-based coordinate, default 1.
        #[arg(long)]
        coord: Option<usize>,
    },
    /// Vector-linear codes from subgroup lists.
    #[command(subcommand)]
    Quasi(Quasi),
    /// Repair erasures with local repair sets.
    Repair {
        code: PathBuf,
        #[arg(long)]
        locality: PathBuf,
        #[arg(long)]
        delta: usize,
        /// Received word, one symbol per token, `?` for an erasure.
        #[arg(long, conflicts_with = "message", required_unless_present = "message")]
        word: Option<PathBuf>,
        /// Encode this message (comma separated) first.
        #[arg(long, value_delimiter = ',')]
        message: Option<Vec<u32>>,
        /// 1-based symbols to erase, comma separated.
        #[arg(long, value_delimiter = ',')]
        erase: Vec<usize>,
    },
    /// Monte Carlo repair statistics.
    Simulate {
        code: PathBuf,
        #[arg(long)]
        locality: PathBuf,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// uniform, adversarial or overload
        #[arg(long, default_value = "uniform")]
        model: ErasureModel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    delta: usize,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Field order, a prime power up to 2^16.
    #[arg(long)]
    q: u32,
    /// Modulus polynomial as an integer (coefficients in base p).
    #[arg(long)]
    poly: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Random draws, each verified, until one reaches the distance floor.
    AlmostOptimal {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Block sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = lrc::construct::DEFAULT_RETRIES)]
        retries: u32,
    },
    /// One unverified draw.
    Random {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Measure the distance and compare it with the floor.
        #[arg(long)]
        check: bool,
    },
    /// A member of one of the quasi-uniform families.
    Family {
        /// c1-33, c2-33 or c1-43
        #[arg(long)]
        name: lrc::quasi::Family,
        #[arg(long)]
        i: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Quasi {
    /// Parameters, locality and optimality of a subgroup spec.
    Verify {
        spec: PathBuf,
        /// Repair sets to check; discovered when omitted.
        #[arg(long)]
        locality: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bound(_) => "bound",
            Command::Mindist { .. } => "mindist",
            Command::Verify { .. } => "verify",
            Command::Construct(Construct::AlmostOptimal { .. }) => "construct almost-optimal",
            Command::Construct(Construct::Random { .. }) => "construct random",
            Command::Construct(Construct::Family { .. }) => "construct family",
            Command::Enlarge { .. } => "enlarge",
            Command::Puncture { .. } => "puncture",
            Command::Quasi(Quasi::Verify { .. }) => "quasi verify",
            Command::Repair { .. } => "repair",
            Command::Simulate { .. } => "simulate",
        }
    }
}

/// Library errors that mean "the check ran and the answer is no".
fn is_verification_failure(err: &anyhow::Error) -> bool {
    use lrc::Error::*;
    matches!(
        err.downcast_ref::<lrc::Error>(),
        Some(
            RetriesExhausted { .. }
                | RepairImpossible { .. }
                | NotACodeword
                | LocalityNotVerified(_)
                | NoWitnessFound { .. }
                | InputNotVerified(_)
        )
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let budget = Budget {
        enumeration: cli.budget.unwrap_or_else(|| Budget::from_env().enumeration),
    };
    let mut report = Report::new(cli.command.name());
    let code = match commands::run(&cli.command, budget, &mut report) {
        Ok(()) if report.failed() => EXIT_FAILED,
        Ok(()) => 0,
        Err(e) if is_verification_failure(&e) => {
            report.set("error", e.to_string());
            report.fail();
            EXIT_FAILED
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match report.render(cli.format, cli.out.as_deref()) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_ERROR);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
