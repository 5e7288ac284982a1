//! `dofde`: solve distributed-order fractional differential equations from the
//! command line and write reproducible CSV/JSON artifacts.
//!
//! Exit codes: 0 on success, 1 when an output file cannot be written, 2 for
//! usage and configuration errors, 3 when the solver fails or does not
//! converge.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dofde::config::load_problem;
use dofde::report::{benchmark_table, sample_points, scan_csv, SolveReport};
use dofde::{
    builtin, lambda_random_search, solve, Dims, Error, ExampleId, Formulation, Problem,
    SolverConfig, TrainedModel,
};

#[derive(Parser)]
#[command(
    name = "dofde",
    version,
    about = "Gegenbauer least-squares solver for distributed-order fractional DEs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem; writes report.json and solution.csv.
    Solve(SolveArgs),
    /// Random search over the Gegenbauer parameter; writes scan.csv and report.json for the best trial.
    ScanLambda(ScanArgs),
    /// Reproduce a benchmark table (ex2 or ex4); writes table.csv.
    Table(TableArgs),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct ProblemArgs {
    /// Built-in example: ex1, ex2, ex3 or ex4.
    #[arg(long, group = "source", value_parser = parse_example)]
    example: Option<ExampleId>,
    /// TOML problem description.
    #[arg(long, group = "source", value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// Basis size: `d`, or `DX,DT` in two dimensions.
    #[arg(long, value_parser = parse_dims)]
    d: Option<Dims>,
    /// Collocation points: `N`, or `NX,NT` in two dimensions.
    #[arg(long, value_parser = parse_dims)]
    n: Option<Dims>,
    #[command(flatten)]
    shared: SharedSolverArgs,
}

/// Settings that also apply to the fixed-size benchmark tables.
#[derive(Args)]
struct SharedSolverArgs {
    /// Regularisation parameter.
    #[arg(long)]
    gamma: Option<f64>,
    /// Gegenbauer parameter.
    #[arg(long)]
    lambda: Option<f64>,
    /// Gauss–Legendre order of the derivative-order integral.
    #[arg(long)]
    q: Option<usize>,
    /// Linear system to solve: primal or dual.
    #[arg(long, value_parser = parse_formulation)]
    formulation: Option<Formulation>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory.
    #[arg(long, env = "DOFDE_OUT_DIR", default_value = "dofde-out")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Sampling grid `start:stop:step`, or `X,T` specs in two dimensions.
    #[arg(long, value_name = "SPEC")]
    sample_grid: Option<String>,
    /// Store the wall-clock time in the report (makes it non-reproducible).
    #[arg(long)]
    record_timing: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Search interval `low:high`.
    #[arg(long, default_value = "0.1:3", value_parser = parse_range, allow_hyphen_values = true)]
    range: (f64, f64),
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampling grid of the best trial's report.
    #[arg(long, value_name = "SPEC")]
    sample_grid: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct TableArgs {
    /// ex2 or ex4.
    #[arg(long, value_parser = parse_example)]
    example: ExampleId,
    #[command(flatten)]
    shared: SharedSolverArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_example(s: &str) -> Result<ExampleId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_dims(s: &str) -> Result<Dims, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_formulation(s: &str) -> Result<Formulation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (low, high) = s.split_once(':').ok_or("expected low:high")?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number `{v}`"))
    };
    Ok((parse(low)?, parse(high)?))
}

enum Failure {
    Io(anyhow::Error),
    Usage(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Solver(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::UnknownExample(_) | Error::Expr(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Solver(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::ScanLambda(args) => run_scan(args),
        Command::Table(args) => run_table(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Usage(m) | Failure::Solver(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

/// The problem and the configuration it starts from, before flag overrides.
fn load(args: &ProblemArgs) -> Result<(Problem, SolverConfig), Failure> {
    match (args.example, &args.config) {
        (Some(id), _) => Ok((builtin(id), SolverConfig::for_example(id))),
        (None, Some(path)) => {
            let cfg = load_problem(path)?;
            Ok((cfg.problem, cfg.solver.unwrap_or_default()))
        }
        (None, None) => Err(Failure::Usage(
            "one of --example or --config is required".into(),
        )),
    }
}

fn apply_shared(args: &SharedSolverArgs, config: &mut SolverConfig) {
    if let Some(gamma) = args.gamma {
        config.gamma = gamma;
    }
    if let Some(lambda) = args.lambda {
        config.lambda = lambda;
    }
    if let Some(q) = args.q {
        config.quadrature_order = q;
    }
    if let Some(formulation) = args.formulation {
        config.formulation = formulation;
    }
}

fn configured(
    problem_args: &ProblemArgs,
    args: &SolverArgs,
) -> Result<(Problem, SolverConfig), Failure> {
    let (problem, mut config) = load(problem_args)?;
    if let Some(d) = args.d {
        config.basis_size = d;
    }
    if let Some(n) = args.n {
        config.points = n;
    }
    apply_shared(&args.shared, &mut config);
    // any inconsistency between the problem and the settings is the caller's
    config
        .validate(&problem)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    for warning in problem.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok((problem, config))
}

fn write(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

fn not_converged(model: &TrainedModel) -> Failure {
    Failure::Solver(format!(
        "Picard iteration did not converge after {} solves",
        model.picard_iterations
    ))
}

fn run_solve(args: SolveArgs) -> Result<(), Failure> {
    let (problem, config) = configured(&args.problem, &args.solver)?;
    let points = sample_points(&problem, args.sample_grid.as_deref())?;
    let start = Instant::now();
    let model = solve(&problem, &config)?;
    let elapsed = start.elapsed();
    let mut report = SolveReport::build(&problem, &model, &points);
    if args.record_timing {
        report.wall_time_ms = Some(elapsed.as_secs_f64() * 1e3);
    }
    let report_path = write(&args.out.out, "report.json", &report.to_json())?;
    let csv_path = write(&args.out.out, "solution.csv", &report.solution_csv())?;
    println!(
        "{}: residual_max {:e}, residual_rms {:e}",
        report.problem, report.residual_max, report.residual_rms
    );
    if let Some(err) = report.max_error_vs_exact {
        println!("max error vs exact {err:e}");
    }
    println!("wrote {} and {}", report_path.display(), csv_path.display());
    if !model.converged {
        return Err(not_converged(&model));
    }
    Ok(())
}

fn run_scan(args: ScanArgs) -> Result<(), Failure> {
    let (problem, config) = configured(&args.problem, &args.solver)?;
    let points = sample_points(&problem, args.sample_grid.as_deref())?;
    let scan = lambda_random_search(&problem, &config, args.range, args.trials, args.seed)?;
    let scan_path = write(&args.out.out, "scan.csv", &scan_csv(&scan))?;
    println!("wrote {}", scan_path.display());
    let Some(best) = scan.best_lambda else {
        return Err(Failure::Solver("no trial succeeded".into()));
    };
    let model = solve(
        &problem,
        &SolverConfig {
            lambda: best,
            ..config
        },
    )?;
    let report = SolveReport::build(&problem, &model, &points);
    let report_path = write(&args.out.out, "report.json", &report.to_json())?;
    println!(
        "best lambda {best:?}, residual_max {:e}",
        report.residual_max
    );
    println!("wrote {}", report_path.display());
    Ok(())
}

fn run_table(args: TableArgs) -> Result<(), Failure> {
    let mut config = SolverConfig::for_example(args.example);
    apply_shared(&args.shared, &mut config);
    let table = benchmark_table(args.example, &config)?;
    let path = write(&args.out.out, "table.csv", &table.to_csv())?;
    println!("wrote {} ({} rows)", path.display(), table.rows.len());
    Ok(())
}
