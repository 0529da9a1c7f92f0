use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partconj::commands::{self, PairSource, EXIT_ERROR};
use partconj::io::CliError;
use partconj::report::Report;
use partconj_core::edge::DEFAULT_RANK_TOL;
use partconj_core::SolverConfig;

#[derive(Parser)]
#[command(name = "partconj", version, about = "Product vectors with partial conjugates in prescribed subspaces")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    /// Residual below which a pair counts as a witness.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Record the per-sweep singular value history of every restart.
    #[arg(long)]
    trace: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            restarts: self.restarts,
            tol_residual: self.tol,
            max_iters: self.max_iters,
            trace: self.trace,
            ..SolverConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verdict on whether every pair of codimensions (k, l) in C^n ⊗ C^m has a witness.
    Condition { m: usize, n: usize, k: usize, l: usize },
    /// Exceptional quadruples with m <= n and mn <= MAX, checked against the closed-form families.
    Scan { max: usize },
    /// Search for x ⊗ y in D with conj(x) ⊗ y in E.
    Find {
        /// Subspace JSON for D.
        #[arg(long, requires = "e", conflicts_with = "example")]
        d: Option<PathBuf>,
        /// Subspace JSON for E.
        #[arg(long, requires = "d")]
        e: Option<PathBuf>,
        /// Built-in pair: ex-2x2-extreme, ex-2x2k or ex-3x3.
        #[arg(long, required_unless_present = "d")]
        example: Option<String>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Edge-state types (p, q) not excluded for m ⊗ n.
    Types { m: usize, n: usize },
    /// Checks that the decomposable map of the 3 x 3 pair is the trace map.
    TraceCert,
    /// Looks for a product vector in R(A) whose partial conjugate lies in R(A^τ).
    EdgeCheck {
        /// State JSON.
        state: PathBuf,
        /// Relative eigenvalue cutoff for ranks and ranges.
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rank_tol: f64,
        /// Eigenvalues of A and A^τ must be >= -PPT_TOL.
        #[arg(long, default_value_t = 1e-10)]
        ppt_tol: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Writes Subspace JSON for a seeded random subspace of codimension CODIM.
    RandomSubspace {
        m: usize,
        n: usize,
        codim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(command: Command) -> Result<Option<Report>, CliError> {
    let report = match command {
        Command::Condition { m, n, k, l } => commands::condition(m, n, k, l)?,
        Command::Scan { max } => commands::scan(max)?,
        Command::Find { d, e, example, solver } => {
            let source = match (&d, &e, &example) {
                (Some(d), Some(e), None) => PairSource::Files { d, e },
                (None, None, Some(name)) => PairSource::Example(name),
                _ => return Err(CliError::Format("give either --d and --e, or --example".into())),
            };
            commands::find(source, &solver.config())?
        }
        Command::Types { m, n } => commands::types(m, n)?,
        Command::TraceCert => commands::trace_cert(),
        Command::EdgeCheck { state, rank_tol, ppt_tol, solver } => {
            commands::edge_check(&state, &solver.config(), rank_tol, ppt_tol)?
        }
        Command::RandomSubspace { m, n, codim, seed } => {
            println!("{}", commands::random_subspace_file(m, n, codim, seed)?);
            return Ok(None);
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let start = Instant::now();
    match run(cli.command) {
        Ok(Some(mut report)) => {
            report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Table => print!("{}", report.to_table()),
            }
            ExitCode::from(report.exit_code as u8)
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
