//! Unified command-line entry point: pipelines over matrix/subspace/relation
//! files, scenario configs, the bundled fixture library, and the self test.

mod config;
mod parse;
mod pipelines;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opran::{Error, ToleranceContext};

const EXIT_CODE_HELP: &str = "exit codes:
  0  success, all checks passed
  1  a pipeline or self-test assertion failed
  2  no factorization (range inclusion fails)
  3  unknown pipeline in a scenario config
  4  scenario config parse error
  5  i/o error
  6  invalid input (malformed file, non-PSD matrix, dimension mismatch)
  7  numerical precondition failed (hypothesis, convergence, contraction)

All randomness derives from the single --seed through the ChaCha8 stream
cipher, so identical invocations produce byte-identical CSV output.";

#[derive(Parser)]
#[command(name = "opran", version, about = "Operator-range calculus at desk scale", after_help = EXIT_CODE_HELP)]
struct Cli {
    /// Seed for every random draw (ChaCha8).
    #[arg(long, global = true, default_value_t = 20260809)]
    seed: u64,
    /// Relative rank cutoff; default 64 * machine epsilon.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Comparison tolerance for matrix-equality checks; default 1e-9.
    #[arg(long, global = true)]
    tol_cmp: Option<f64>,
    /// Directory for CSV and emitted fixture files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve A = B C with the minimal-range factor; prints C, residual, lambda.
    Douglas { a: PathBuf, b: PathBuf },
    /// Parallel sum of two PSD operators; --route all adds the oracle routes.
    Parsum {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value = "all")]
        route: String,
    },
    /// Kreĭn shorted operator of B to the subspace K.
    Short { b: PathBuf, k: PathBuf },
    /// Projection family P(x) for a singular pair; emits CSV over the x grid.
    Pxfamily {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0, 4.0])]
        xs: Vec<f64>,
    },
    /// Iterated compression chain; emits CSV of norms and monotonicity flags.
    Chain {
        a: PathBuf,
        m: PathBuf,
        #[arg(long, default_value_t = 20)]
        k: usize,
    },
    /// Lifting criterion for A against the subspace M.
    Liftcheck { a: PathBuf, m: PathBuf },
    /// Truncation sweep of the graded lifting model; emits CSV.
    Liftsweep {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value = "8,16,32,64,128")]
        ns: String,
    },
    /// Split a nonnegative operator into the canonical relation pair.
    Splitpair { t: PathBuf, m: PathBuf },
    /// Euler resolvent-power approximation sweep; emits CSV of errors.
    Euler {
        t: PathBuf,
        #[arg(long, default_value = "1+0i")]
        z: String,
        #[arg(long, default_value = "8..1024")]
        ns: String,
    },
    /// Alternating Trotter products of two relations; emits CSV of distances.
    Trotter {
        t1: PathBuf,
        t2: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value = "2..256")]
        ns: String,
    },
    /// Friedrichs/Kreĭn extensions of a divergence form, with the sandwich.
    Divext {
        l2: PathBuf,
        d: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Product-pair report for an invertible Hermitian factor.
    Prodpair { b: PathBuf, m: PathBuf },
    /// Run a scenario from a flat key-value config file.
    Run { config: PathBuf },
    /// List bundled fixtures or emit one into --out.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Run the acceptance battery; prints one pass/fail line per criterion.
    Selftest,
}

#[derive(Subcommand)]
enum FixturesAction {
    List,
    Emit { name: String },
}

fn tolerance_context(cli: &Cli) -> Result<ToleranceContext, Error> {
    let d = ToleranceContext::default();
    ToleranceContext::new(
        cli.tol_rank.unwrap_or(d.rank_rel_tol),
        d.psd_clamp_tol,
        cli.tol_cmp.unwrap_or(d.cmp_tol),
    )
}

/// Map library errors onto the documented exit codes.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::NoFactorization { .. } => 2,
        Error::Io(_) => 5,
        Error::Parse(_)
        | Error::NotSquare { .. }
        | Error::NotPsd { .. }
        | Error::NotHermitian { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidTolerance { .. }
        | Error::EmptyList
        | Error::BadSchedule
        | Error::BadModel(_)
        | Error::UnknownFixture(_) => 6,
        _ => 7,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match tolerance_context(&cli) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(6);
        }
    };
    let env = pipelines::Env {
        ctx,
        seed: cli.seed,
        out: cli.out.clone(),
    };
    let outcome = match &cli.command {
        Command::Douglas { a, b } => pipelines::douglas(&env, a, b),
        Command::Parsum { f, g, route } => pipelines::parsum(&env, f, g, route),
        Command::Short { b, k } => pipelines::short(&env, b, k),
        Command::Pxfamily { a, b, xs } => pipelines::pxfamily(&env, a, b, xs),
        Command::Chain { a, m, k } => pipelines::chain(&env, a, m, *k),
        Command::Liftcheck { a, m } => pipelines::liftcheck(&env, a, m),
        Command::Liftsweep { a, b, ns } => pipelines::liftsweep(&env, *a, *b, ns),
        Command::Splitpair { t, m } => pipelines::splitpair(&env, t, m),
        Command::Euler { t, z, ns } => pipelines::euler(&env, t, z, ns),
        Command::Trotter { t1, t2, t, ns } => pipelines::trotter(&env, t1, t2, *t, ns),
        Command::Divext { l2, d, samples } => pipelines::divext(&env, l2, d, *samples),
        Command::Prodpair { b, m } => pipelines::prodpair(&env, b, m),
        Command::Run { config } => {
            return match config::run_scenario(&env, config) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(1),
                Err(config::ScenarioError::UnknownPipeline(name)) => {
                    eprintln!("error: unknown pipeline `{name}`");
                    ExitCode::from(3)
                }
                Err(config::ScenarioError::Config(msg)) => {
                    eprintln!("error: config parse: {msg}");
                    ExitCode::from(4)
                }
                Err(config::ScenarioError::Lib(e)) => {
                    eprintln!("error: {e}");
                    ExitCode::from(error_code(&e))
                }
            };
        }
        Command::Fixtures { action } => match action {
            FixturesAction::List => pipelines::fixtures_list(),
            FixturesAction::Emit { name } => pipelines::fixtures_emit(&env, name),
        },
        Command::Selftest => pipelines::selftest(&env),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
