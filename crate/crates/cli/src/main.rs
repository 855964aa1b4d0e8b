//! `fiberopt` — exact solvers for nonlinear objectives over linear images
//! of combinatorial feasible sets.
//!
//! Exit codes: 0 success, 10 load/parse failure, 11 infeasible instance,
//! 12 enumeration cap exceeded, 13 verification mismatch, 1 internal error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fiberopt::error::Error;
use fiberopt::harness::{GenOptions, Instance, InstanceKind, Sense};
use fiberopt::instance::{parse_instance, serialize_instance};
use fiberopt::Result;
use fiberopt_cli::{
    exit_code, parse_objective_flag, parse_rational_csv, run_fibers, run_solve, run_support,
    Algorithm, SolveOptions, SupportChoice, EXIT_MISMATCH,
};

#[derive(Parser)]
#[command(
    name = "fiberopt",
    version,
    about = "Exact and approximate optimization of nonlinear objectives over weighted images of combinatorial sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver on an instance file and print a JSON report.
    Solve(SolveArgs),
    /// Run a solver and always compare against brute-force enumeration.
    Verify(SolveArgs),
    /// Enumerate the image vertices of an instance with certificates.
    Fibers(FibersArgs),
    /// Show one seeded support-recovery run on a matroid instance.
    Support(SupportArgs),
    /// Generate a random instance file.
    Gen(GenArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Solver: exact-max, norm-max, raycave-min, or matroid-random.
    #[arg(long, default_value = "exact-max")]
    algorithm: String,
    /// Objective override: pnorm:<p|inf>, linear:<csv>, l1-minus-lp:<p|inf>,
    /// max-coordinate, or min-coordinate.
    #[arg(long)]
    objective: Option<String>,
    /// Primary-objective override: comma-separated rationals over the
    /// ground space (solvers then run on its optimal face).
    #[arg(long)]
    primary_objective: Option<String>,
    /// Master seed for randomized algorithms.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Randomized repeats (best outcome wins).
    #[arg(long, default_value_t = 8)]
    repeats: usize,
    /// Worker threads (1 = sequential).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also run the brute-force reference and compare.
    #[arg(long)]
    verify: bool,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FibersArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Worker threads (1 = sequential).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SupportArgs {
    /// Instance file (JSON); must use a matroid-pair model with
    /// nonnegative weights.
    #[arg(long)]
    instance: PathBuf,
    /// Seed of the substitution draw.
    #[arg(long, default_value_t = 0, conflicts_with = "a")]
    seed: u64,
    /// Explicit substitution values (comma-separated positive integers),
    /// instead of a seeded draw.
    #[arg(long)]
    a: Option<String>,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Family: uniform-matroid-pair, graphic-like, transversal-like,
    /// permutation-matrices, or random-points.
    #[arg(long)]
    kind: String,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground-set size override.
    #[arg(long)]
    ground: Option<usize>,
    /// Rank override (matroid kinds).
    #[arg(long)]
    rank: Option<usize>,
    /// Image-dimension override.
    #[arg(long)]
    image_dim: Option<usize>,
    /// Budget override (explicit kinds).
    #[arg(long)]
    beta: Option<u64>,
    /// Allow negative weight digits.
    #[arg(long)]
    signed_weights: bool,
    /// Fixed objective instead of a drawn one (same grammar as solve).
    #[arg(long)]
    objective: Option<String>,
    /// Fixed direction: maximize or minimize.
    #[arg(long)]
    sense: Option<String>,
    /// Force a primary functional to be present (or absent with
    /// --no-primary).
    #[arg(long, conflicts_with = "no_primary")]
    with_primary: bool,
    /// Force the absence of a primary functional.
    #[arg(long)]
    no_primary: bool,
    /// Write the instance here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn parse_u64_csv(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("invalid substitution value {t:?}")))
        })
        .collect()
}

fn parse_sense_flag(s: &str) -> Result<Sense> {
    match s {
        "maximize" => Ok(Sense::Maximize),
        "minimize" => Ok(Sense::Minimize),
        _ => Err(Error::Parse(format!("--sense must be maximize or minimize, got {s:?}"))),
    }
}

fn solve_options(args: &SolveArgs, force_verify: bool) -> Result<SolveOptions> {
    let algorithm = Algorithm::parse(&args.algorithm).ok_or_else(|| {
        Error::Parse(format!(
            "unknown algorithm {:?}; expected exact-max, norm-max, raycave-min, or matroid-random",
            args.algorithm
        ))
    })?;
    let objective = args.objective.as_deref().map(parse_objective_flag).transpose()?;
    let primary = args.primary_objective.as_deref().map(parse_rational_csv).transpose()?;
    Ok(SolveOptions {
        algorithm,
        seed: args.seed,
        repeats: args.repeats,
        threads: args.threads,
        objective,
        primary,
        verify: args.verify || force_verify,
    })
}

/// Runs a command; `Ok(n)` is a controlled exit with code `n`.
fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve(args) => run_solve_command(args, false),
        Command::Verify(args) => run_solve_command(args, true),
        Command::Fibers(args) => {
            let instance = load_instance(&args.instance)?;
            let report = run_fibers(&instance, args.threads)?;
            emit(&report.to_json(), args.out.as_deref())?;
            Ok(0)
        }
        Command::Support(args) => {
            let instance = load_instance(&args.instance)?;
            let choice = match &args.a {
                Some(csv) => SupportChoice::Explicit(parse_u64_csv(csv)?),
                None => SupportChoice::Seeded(args.seed),
            };
            let report = run_support(&instance, &choice)?;
            emit(&report.to_json(), args.out.as_deref())?;
            Ok(0)
        }
        Command::Gen(args) => {
            let kind = InstanceKind::parse(&args.kind).ok_or_else(|| {
                Error::Parse(format!(
                    "unknown kind {:?}; expected one of {}",
                    args.kind,
                    InstanceKind::ALL.map(|k| k.label()).join(", ")
                ))
            })?;
            let opts = GenOptions {
                ground: args.ground,
                rank: args.rank,
                image_dim: args.image_dim,
                beta: args.beta,
                signed_weights: args.signed_weights,
                objective: args.objective.as_deref().map(parse_objective_flag).transpose()?,
                sense: args.sense.as_deref().map(parse_sense_flag).transpose()?,
                with_primary: if args.with_primary {
                    Some(true)
                } else if args.no_primary {
                    Some(false)
                } else {
                    None
                },
            };
            let instance = fiberopt::harness::gen_instance(kind, args.seed, &opts)?;
            emit(&serialize_instance(&instance), args.out.as_deref())?;
            Ok(0)
        }
    }
}

fn run_solve_command(args: SolveArgs, force_verify: bool) -> Result<i32> {
    let instance = load_instance(&args.instance)?;
    let opts = solve_options(&args, force_verify)?;
    let report = run_solve(&instance, &opts)?;
    emit(&report.to_json(), args.out.as_deref())?;
    let mismatch = report
        .verification
        .as_ref()
        .map(|v| !v.is_acceptable())
        .unwrap_or(false);
    Ok(if mismatch { EXIT_MISMATCH } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
