//! Command-line surface for the entropy library: variety inspection,
//! certified solves, sweeps, curve emission, recursion tables, cohomology
//! reports, the conjecture verdict, and a one-shot verification suite.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence or
//! exhausted budget, 3 internal invariant violation. Reports go to stdout
//! (or `--output`); diagnostics go to stderr. Identical invocations produce
//! byte-identical reports.

#![allow(clippy::result_large_err)]

mod report;
mod verify;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cy_entropy_core::dynamics::{self, CMode, SParam};
use cy_entropy_core::entropy::{self, EntropyError};
use cy_entropy_core::geometry::{self, VarietySpec};
use cy_entropy_core::numerics::{parse_rational, NumericsError, Polynomial, Rational};
use cy_entropy_core::cohomology;
use num_traits::Signed;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug)]
enum CliError {
    Invalid(String),
    NonConvergence(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::NonConvergence(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::NonConvergence(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<geometry::GeometryError> for CliError {
    fn from(e: geometry::GeometryError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<EntropyError> for CliError {
    fn from(e: EntropyError) -> Self {
        match e {
            EntropyError::SweepAt { index, source } => {
                let inner = CliError::from(*source);
                let msg = format!("sweep index {index}: {}", inner.message());
                match inner {
                    CliError::NonConvergence(_) => CliError::NonConvergence(msg),
                    CliError::Internal(_) => CliError::Internal(msg),
                    CliError::Invalid(_) => CliError::Invalid(msg),
                }
            }
            EntropyError::Numerics(NumericsError::ToleranceNotAchieved { .. })
            | EntropyError::BracketingFailed { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<dynamics::DynamicsError> for CliError {
    fn from(e: dynamics::DynamicsError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<cohomology::CohomologyError> for CliError {
    fn from(e: cohomology::CohomologyError) -> Self {
        match e {
            cohomology::CohomologyError::Entropy(inner) => CliError::from(inner),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser)]
#[command(
    name = "cy-entropy",
    version,
    about = "Categorical entropy of the twist-then-tensor autoequivalence on Calabi-Yau hypersurfaces",
    after_help = "Environment: CY_ENTROPY_THREADS caps internal parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a variety: invariants, Hilbert polynomial, first a_k values
    Variety(VarietyArgs),
    /// Solve the entropy equation at one t (or exact rhs)
    Solve(SolveArgs),
    /// Solve across an evenly spaced t-grid
    Sweep(SweepArgs),
    /// Emit the algebraic curve F(u, y) = 0 traced by (e^t, e^lambda)
    Curve(CurveArgs),
    /// Run the dimension-counting recursion and report growth estimates
    Dynamics(DynamicsArgs),
    /// Matrices and spectral data of the induced cohomological action
    Cohomology(CohomologyArgs),
    /// Entropy-vs-spectral-radius verdict at t = 0
    Counterexample(CohomologyArgs),
    /// Run the cross-module verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VarietyOpts {
    /// Complex dimension d >= 3
    #[arg(long)]
    dim: u32,
    /// Hypersurface degree; defaults to d+2, the Calabi-Yau case
    #[arg(long, conflicts_with = "hilbert")]
    degree: Option<u32>,
    /// User Hilbert polynomial, ascending comma-separated rational
    /// coefficients (e.g. "0,25/12,0,5/6" is invalid data, it must be the
    /// full degree-d polynomial)
    #[arg(long, value_delimiter = ',')]
    hilbert: Option<Vec<String>>,
}

impl VarietyOpts {
    fn build(&self) -> Result<VarietySpec, CliError> {
        let hilbert = match &self.hilbert {
            None => None,
            Some(raw) => {
                let coeffs: Result<Vec<Rational>, _> =
                    raw.iter().map(|s| parse_rational(s)).collect();
                Some(Polynomial::new(coeffs.map_err(|e| {
                    CliError::Invalid(format!("bad --hilbert coefficient: {e}"))
                })?))
            }
        };
        Ok(geometry::make_variety(self.dim, self.degree, hilbert)?)
    }
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

impl OutputOpts {
    fn emit(&self, content: String) -> Result<(), CliError> {
        let mut content = content;
        if !content.ends_with('\n') {
            content.push('\n');
        }
        match &self.output {
            Some(path) => std::fs::write(path, content)?,
            None => std::io::stdout().write_all(content.as_bytes())?,
        }
        Ok(())
    }
}

#[derive(Args)]
struct VarietyArgs {
    #[command(flatten)]
    variety: VarietyOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    variety: VarietyOpts,
    /// Shift parameter t (float mode; rhs = e^{(d-1)t} with one-ulp slack)
    #[arg(long, conflicts_with = "rhs", allow_hyphen_values = true)]
    t: Option<f64>,
    /// Exact rational right-hand side e^{(d-1)t}, e.g. "1" or "3/2"
    /// (certified mode)
    #[arg(long)]
    rhs: Option<String>,
    /// Bracket tolerance as an exact rational; default 1/2^64
    #[arg(long)]
    tol: Option<String>,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    variety: VarietyOpts,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long)]
    tol: Option<String>,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    variety: VarietyOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct DynamicsArgs {
    #[command(flatten)]
    variety: VarietyOpts,
    /// Shift parameter t; s = e^{-(d-1)t}
    #[arg(long, conflicts_with = "s", allow_hyphen_values = true)]
    t: Option<f64>,
    /// Exact rational s = e^{-(d-1)t}, e.g. "1" or "3/7"
    #[arg(long)]
    s: Option<String>,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    /// exact: rationals, n_max <= 200; log: log-space, any n_max
    #[arg(long, value_enum, default_value_t = DynMode::Log)]
    mode: DynMode,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DynMode {
    Exact,
    Log,
}

#[derive(Args)]
struct CohomologyArgs {
    #[command(flatten)]
    variety: VarietyOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct VerifyArgs {
    /// Dimensions to verify, within 3..=8 (e.g. --dims 3,4); a bare --dims
    /// runs zero checks and passes trivially
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = vec![3u32, 4])]
    dims: Vec<u32>,
    /// Wall-clock budget in seconds; exceeded budget yields a partial
    /// report and exit code 2
    #[arg(long, default_value_t = 600.0)]
    budget_secs: f64,
    /// Seed for the randomized property checks
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    out: OutputOpts,
}

fn main() {
    init_thread_pool();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("CY_ENTROPY_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring unparseable CY_ENTROPY_THREADS={raw:?}"),
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Variety(args) => {
            let x = args.variety.build()?;
            let content = match args.out.format {
                Format::Json => report::variety_json(&x),
                Format::Csv => report::variety_csv(&x),
                Format::Text => report::variety_text(&x),
            };
            args.out.emit(content)?;
            Ok(0)
        }
        Command::Solve(args) => {
            let x = args.variety.build()?;
            let tol = parse_tolerance(&args.tol)?;
            let rhs = match &args.rhs {
                Some(raw) => Some(parse_rational(raw).map_err(invalid)?),
                None => None,
            };
            let t = args.t.unwrap_or(0.0);
            let result = entropy::solve_entropy(&x, t, &tol, rhs.as_ref())?;
            let content = match args.out.format {
                Format::Json => report::solve_json(&x, &result),
                Format::Csv => report::solve_csv(&result),
                Format::Text => report::solve_text(&x, &result),
            };
            args.out.emit(content)?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let x = args.variety.build()?;
            let tol = parse_tolerance(&args.tol)?;
            let points = entropy::sweep(&x, args.t_min, args.t_max, args.steps, &tol)?;
            let content = match args.out.format {
                Format::Json => report::sweep_json(&x, &points),
                Format::Csv => report::sweep_csv(&points),
                Format::Text => report::sweep_text(&points),
            };
            args.out.emit(content)?;
            Ok(0)
        }
        Command::Curve(args) => {
            let x = args.variety.build()?;
            let curve = entropy::entropy_curve(&x)?;
            let content = match args.out.format {
                Format::Json => report::curve_json(&x, &curve),
                Format::Csv => report::curve_csv(&curve),
                Format::Text => report::curve_text(&x, &curve),
            };
            args.out.emit(content)?;
            Ok(0)
        }
        Command::Dynamics(args) => {
            let x = args.variety.build()?;
            let s = match (&args.s, args.t) {
                (Some(raw), _) => SParam::Exact(parse_rational(raw).map_err(invalid)?),
                (None, Some(t)) if t != 0.0 => SParam::from_t(&x, t),
                _ => SParam::one(),
            };
            let mode = match args.mode {
                DynMode::Exact => CMode::Exact,
                DynMode::Log => CMode::LogSpace,
            };
            let sequence = dynamics::c_sequence(&x, &s, args.n_max, mode)?;
            let estimate = dynamics::growth_estimate(&sequence.table).ok();
            let content = match args.out.format {
                Format::Json => report::dynamics_json(&x, &s, &sequence, estimate.as_ref()),
                Format::Csv => report::dynamics_csv(&sequence),
                Format::Text => report::dynamics_text(&sequence, estimate.as_ref()),
            };
            args.out.emit(content)?;
            Ok(0)
        }
        Command::Cohomology(args) => {
            let x = args.variety.build()?;
            let matrices = cohomology::phi_action_matrix(&x)?;
            let spectral = cohomology::spectral_analysis(&matrices.phi, x.dim() + 2);
            let content = match args.out.format {
                Format::Json => report::cohomology_json(&x, &matrices, &spectral)?,
                Format::Csv => {
                    return Err(CliError::Invalid(
                        "cohomology has no CSV form; use json or text".into(),
                    ))
                }
                Format::Text => report::cohomology_text(&x, &matrices, &spectral),
            };
            args.out.emit(content)?;
            Ok(0)
        }
        Command::Counterexample(args) => {
            let x = args.variety.build()?;
            let verdict = cohomology::counterexample_report(&x)?;
            let content = match args.out.format {
                Format::Json => report::counterexample_json(&x, &verdict)?,
                Format::Csv => {
                    return Err(CliError::Invalid(
                        "counterexample has no CSV form; use json or text".into(),
                    ))
                }
                Format::Text => report::counterexample_text(&x, &verdict),
            };
            args.out.emit(content)?;
            Ok(0)
        }
        Command::Verify(args) => {
            for d in &args.dims {
                if !(3..=8).contains(d) {
                    return Err(CliError::Invalid(format!(
                        "--dims entries must lie in 3..=8, got {d}"
                    )));
                }
            }
            let outcome = verify::run_suite(&args.dims, args.budget_secs, args.seed);
            let content = match args.out.format {
                Format::Json => verify::report_json(&outcome),
                Format::Text | Format::Csv => verify::report_text(&outcome),
            };
            args.out.emit(content)?;
            Ok(outcome.exit_code())
        }
    }
}

fn parse_tolerance(raw: &Option<String>) -> Result<Rational, CliError> {
    match raw {
        None => Ok(entropy::default_tolerance()),
        Some(raw) => {
            let tol = parse_rational(raw).map_err(invalid)?;
            if !tol.is_positive() {
                return Err(CliError::Invalid("tolerance must be positive".into()));
            }
            Ok(tol)
        }
    }
}

fn invalid(e: NumericsError) -> CliError {
    CliError::Invalid(e.to_string())
}
