//! milred: generate, reduce, train, evaluate, bound, verify.
//!
//! Datasets are line-delimited JSON, models are JSON, metric reports are CSV
//! with columns metric,space,value,tolerance,pass, and verification reports
//! are JSON with per-check witnesses. All commands are deterministic given
//! their flags and seeds.
//!
//! Exit codes: 0 success, 2 verification failure, 3 dataset parse error,
//! 4 solver non-convergence, 1 anything else.

mod commands;
mod formats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use milred::solvers::SolverConfig;

#[derive(Debug)]
pub enum CliError {
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    Verification {
        message: String,
    },
    NonConvergence {
        trace_path: PathBuf,
    },
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Data {
        message: String,
    },
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn data(message: String) -> Self {
        CliError::Data { message }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 2,
            CliError::Parse { .. } => 3,
            CliError::NonConvergence { .. } => 4,
            CliError::Io { .. } | CliError::Data { .. } => 1,
        }
    }
}

impl From<milred::Error> for CliError {
    fn from(e: milred::Error) -> Self {
        CliError::Data {
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse {
                path,
                line,
                message,
            } => write!(f, "{}: line {line}: {message}", path.display()),
            CliError::Verification { message } => write!(f, "verification failed: {message}"),
            CliError::NonConvergence { trace_path } => write!(
                f,
                "solver did not converge; objective trace written to {}",
                trace_path.display()
            ),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Data { message } => write!(f, "{message}"),
        }
    }
}

/// Problem kinds a dataset file can hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Mil,
    Trl,
    Mcl,
    Lcl,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Mil => write!(f, "mil"),
            Kind::Trl => write!(f, "trl"),
            Kind::Mcl => write!(f, "mcl"),
            Kind::Lcl => write!(f, "lcl"),
        }
    }
}

/// Kinds that reduce to MIL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OriginalKind {
    Trl,
    Mcl,
    Lcl,
}

impl std::fmt::Display for OriginalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OriginalKind::Trl => write!(f, "trl"),
            OriginalKind::Mcl => write!(f, "mcl"),
            OriginalKind::Lcl => write!(f, "lcl"),
        }
    }
}

pub type EvalKind = Kind;

#[derive(Parser)]
#[command(
    name = "milred",
    version,
    about = "Reduce ranking, multi-class, and complementary-label learning to multiple-instance learning; train, evaluate, bound, verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
pub struct GenArgs {
    /// Dataset kind to generate.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of examples.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Feature dimension.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Class count (mcl/lcl).
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Items per set (trl) or instances per bag (mil).
    #[arg(long, default_value_t = 4)]
    set_size: usize,
    /// Probability of an ordinary label (lcl).
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Feature norm cap.
    #[arg(long, default_value_t = 1.0)]
    r_norm: f64,
    /// Separation margin enforced by rejection sampling.
    #[arg(long)]
    margin: Option<f64>,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (default: `<kind>.jsonl`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional sidecar path for true labels (lcl only).
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct SolverArgs {
    /// Slack penalty weight.
    #[arg(long, default_value_t = 1.0)]
    c_reg: f64,
    /// Objective tolerance (certified duality gap).
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Inner iteration budget.
    #[arg(long, default_value_t = 50_000)]
    max_iters: usize,
    /// Minimal outer-loop objective decrease.
    #[arg(long, default_value_t = 1e-8)]
    dc_epsilon: f64,
    /// Seed for randomized restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra seeded restarts for the DC solver.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// Outer-loop iteration cap.
    #[arg(long, default_value_t = 100)]
    max_outer_iters: usize,
    /// Optional norm cap on the trained weights.
    #[arg(long)]
    lambda_cap: Option<f64>,
}

impl SolverArgs {
    fn to_config(&self) -> SolverConfig {
        SolverConfig {
            c_reg: self.c_reg,
            tol: self.tol,
            max_iters: self.max_iters,
            dc_epsilon: self.dc_epsilon,
            seed: self.seed,
            restarts: self.restarts,
            max_outer_iters: self.max_outer_iters,
            lambda_cap: self.lambda_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic dataset.
    Gen(GenArgs),
    /// Reduce an original dataset to a MIL dataset.
    Reduce {
        #[arg(long, value_enum)]
        kind: OriginalKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "reduced.jsonl")]
        out: PathBuf,
    },
    /// Train on a MIL dataset; picks the one-class or DC solver by label
    /// content.
    Train {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "model.json")]
        out: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Evaluate a model: empirical risks in the original and reduced spaces,
    /// asserting the integer loss counts match.
    Eval {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "eval.csv")]
        report: PathBuf,
    },
    /// Print the complexity/deviation terms and the assembled risk bound for
    /// a model on a MIL dataset.
    Bound {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Lipschitz constant of the surrogate loss.
        #[arg(long, default_value_t = 1.0)]
        lipschitz: f64,
        /// Instance norm cap (default: max instance norm in the data).
        #[arg(long)]
        r_norm: Option<f64>,
        /// Weight norm cap (default: the model's cap, else its norm).
        #[arg(long)]
        lambda: Option<f64>,
        /// Distribution-dependent capacity parameter (no default).
        #[arg(long)]
        eta: f64,
        /// Confidence level in (0, 1).
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Ordinary-label probability, for the complementary risk scale.
        #[arg(long)]
        theta: Option<f64>,
        /// Class count, for the complementary risk scale.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "bound.csv")]
        report: PathBuf,
    },
    /// Run named oracle checks over a range of seeds; nonzero exit on any
    /// failure.
    Verify {
        /// Comma-separated checks: loss-equality, erm, rademacher,
        /// risk-rescaling, solver; or "all".
        #[arg(long, default_value = "all")]
        checks: String,
        /// Number of seeds (1..=seeds).
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value = "verify.json")]
        report: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => commands::cmd_gen(&args),
        Command::Reduce { kind, input, out } => commands::cmd_reduce(kind, &input, &out),
        Command::Train { input, out, solver } => commands::cmd_train(&input, &out, &solver),
        Command::Eval {
            kind,
            data,
            model,
            report,
        } => commands::cmd_eval(kind, &data, &model, &report),
        Command::Bound {
            data,
            model,
            lipschitz,
            r_norm,
            lambda,
            eta,
            delta,
            theta,
            k,
            report,
        } => commands::cmd_bound(
            &data, &model, lipschitz, r_norm, lambda, eta, delta, theta, k, &report,
        ),
        Command::Verify {
            checks,
            seeds,
            report,
        } => commands::cmd_verify(&checks, seeds, &report),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep exit code 2 reserved for verification failures
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
