//! Command-line front end: construction, Gram certification, identity checks,
//! limit ladders and zero export.
//!
//! Exit codes: 0 pass, 1 usage or parse error, 2 parameter or contour error,
//! 3 verification failure.

mod commands;
mod params;

use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use params::{Family, ParamArgs, QuadArgs};

/// A malformed invocation that clap cannot catch on its own.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Whether the checks a command ran all passed.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Parser, Debug)]
#[command(name = "opoly", version, about = "Discrete orthogonal polynomials beyond the cutoff")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact monic coefficients, lowest degree first.
    Coeffs {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = commands::Path::Hypergeometric)]
        path: commands::Path,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Gram matrix under the Sobolev product.
    Gram {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Structural identity checks, one JSON line per report.
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        id: commands::IdentityId,
        #[arg(long)]
        n: usize,
        /// Difference order; every k in 0..=n when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Generating-function truncation order.
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Replace the given parameters by this many random rational draws.
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Errors of a limit relation along a ladder of parameter values.
    Limits {
        #[arg(long)]
        relation: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1e2,1e3,1e4", allow_hyphen_values = true)]
        ladder: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Complex zeros with the mass points deflated exactly.
    Zeros {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Generating-function checks as truncated power series.
    Gf {
        #[command(flatten)]
        family: FamilyArgs,
        /// Truncation order K.
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// One generating function by name; all forms of the family otherwise.
        #[arg(long)]
        form: Option<String>,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Coeffs { family, n, path, format } => {
            commands::coeffs(&family.params.spec(family.family)?, n, path, format)
        }
        Command::Gram { family, nmax, quad, format } => {
            commands::gram(&family.params.spec(family.family)?, nmax, &quad, format)
        }
        Command::Check { family, id, n, k, order, draws, seed } => {
            commands::check(family.family, &family.params, id, n, k, order, draws, seed)
        }
        Command::Limits { relation, params, n, ladder, format } => commands::limits(&relation, &params, n, &ladder, format),
        Command::Zeros { family, n, format } => commands::zeros(&family.params.spec(family.family)?, n, format),
        Command::Gf { family, order, form } => commands::gf(&family.params.spec(family.family)?, order, form.as_deref()),
    }
}

fn configure_threads() {
    if let Some(t) = std::env::var("OPOLY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only happens in tests and is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
