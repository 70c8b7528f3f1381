use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equinorm::Error;
use equinorm_cli::instance::{generate, GenParams, Instance};
use equinorm_cli::report::tradeoff_csv;
use equinorm_cli::run::{exit_code, parse_portfolio, solve, tradeoff, verify, Options, SolveArgs};

#[derive(Parser)]
#[command(name = "equinorm", version, about = "Portfolios of solutions for ordered and top-k norms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for sampling and generators; EQUINORM_SEED overrides it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of sampled ordered norms.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Feasibility tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Cap on brute-force enumeration.
    #[arg(long, global = true, default_value_t = 1e7)]
    max_brute: f64,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Record wall-clock times (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Clone, Default)]
struct MethodArgs {
    /// Construction to run; defaults depend on the instance type.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Facilities per radius for clustering.
    #[arg(long)]
    k: Option<usize>,
    /// Clustering mode: exact or greedy3.
    #[arg(long)]
    mode: Option<String>,
    /// Satisfier oracle: exhaustive or lp.
    #[arg(long)]
    oracle: Option<String>,
    /// Build covering portfolios on the original matrix.
    #[arg(long)]
    no_sparsify: bool,
}

impl From<MethodArgs> for SolveArgs {
    fn from(m: MethodArgs) -> Self {
        SolveArgs {
            method: m.method,
            alpha: m.alpha,
            eps: m.eps,
            k: m.k,
            mode: m.mode,
            oracle: m.oracle,
            no_sparsify: m.no_sparsify,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file.
    Generate {
        kind: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        base: Option<usize>,
        /// Constraint rows for random covering instances.
        #[arg(long)]
        rows: Option<usize>,
        /// Number of sets for random set cover.
        #[arg(long)]
        sets: Option<usize>,
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a portfolio and certify it.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certify a portfolio file against an instance.
    Verify {
        instance: PathBuf,
        portfolio: PathBuf,
        /// Claimed factor; defaults to the one recorded in the portfolio file.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sweep alpha (MLIJ) or eps and write a CSV.
    Tradeoff {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        epsilons: Vec<f64>,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::Argument(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    let mut opts = Options {
        seed: cli.global.seed,
        samples: cli.global.samples,
        tol: cli.global.tol,
        max_brute: cli.global.max_brute,
        timings: cli.global.timings,
        jobs: cli.global.jobs,
    };
    if let Ok(s) = std::env::var("EQUINORM_SEED") {
        opts.seed = s
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("EQUINORM_SEED must be an unsigned integer, got '{s}'")))?;
    }
    match cli.command {
        Command::Generate {
            kind,
            d,
            n,
            alpha,
            levels,
            base,
            rows,
            sets,
            d_max,
            output,
        } => {
            let g = GenParams {
                d,
                n,
                alpha,
                levels,
                base,
                rows,
                sets,
                d_max,
                seed: opts.seed,
            };
            let (inst, desc) = generate(&kind, &g)?;
            let mut text = serde_json::to_string(&inst).expect("instances serialise");
            text.push('\n');
            eprintln!("{desc}");
            emit(&text, output.as_deref())?;
            Ok(0)
        }
        Command::Solve {
            instance,
            method,
            output,
        } => {
            let inst = Instance::parse(&read(&instance)?)?;
            let report = solve(&inst, &method.into(), &opts)?;
            emit(&report.to_json(), output.as_deref())?;
            Ok(if report.certificates.violation { 4 } else { 0 })
        }
        Command::Verify {
            instance,
            portfolio,
            alpha,
            k,
            output,
        } => {
            let inst = Instance::parse(&read(&instance)?)?;
            let pf = parse_portfolio(&read(&portfolio)?)?;
            let report = verify(&inst, &pf, alpha, k, &opts)?;
            for w in &report.certificates.warnings {
                eprintln!("warning: {w}");
            }
            emit(&report.to_json(), output.as_deref())?;
            Ok(if report.certificates.violation { 4 } else { 0 })
        }
        Command::Tradeoff {
            instance,
            alphas,
            epsilons,
            method,
            output,
        } => {
            let inst = Instance::parse(&read(&instance)?)?;
            let values = match (alphas.is_empty(), epsilons.is_empty()) {
                (false, true) => alphas,
                (true, false) => epsilons,
                _ => return Err(Error::Argument("give exactly one of --alphas or --epsilons".into())),
            };
            let rows = tradeoff(&inst, &values, &method.into(), &opts)?;
            emit(&tradeoff_csv(&rows), output.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
