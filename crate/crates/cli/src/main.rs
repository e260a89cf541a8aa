use clap::{Args, Parser, Subcommand, ValueEnum};
use lptwist_cli::config::TorusMode;
use lptwist_cli::{commands, CliError, Command, ExperimentConfig, OutputFormat};
use lptwist_core::analysis::Exponent;
use std::path::PathBuf;
use std::process::ExitCode;

/// Experiments on twisted group and groupoid Lp-operator algebras over finite structures.
#[derive(Parser)]
#[command(name = "lptwist", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Exponent p in [1, inf]; "inf" for p = ∞.
    #[arg(long, global = true, default_value = "3", value_parser = parse_exponent)]
    p: Exponent,
    #[arg(long, global = true, env = "LPTWIST_SEED", default_value_t = 0)]
    seed: u64,
    /// Overrides the command's default tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Random starts for the p-norm power iteration.
    #[arg(long, global = true, default_value_t = 32)]
    starts: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall time in the report (makes reports differ between runs).
    #[arg(long, global = true)]
    timing: bool,
    /// Fiber order m* for cohomology and phase groups.
    #[arg(long, global = true)]
    search_order: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Sub {
    /// Check group, groupoid and cocycle files.
    Validate { files: Vec<PathBuf> },
    /// Compare F^p_λ(G,σ) and F^p_λ(H,κ) through isometry groups and cocycle classes.
    Rigidity { a: PathBuf, b: PathBuf },
    /// Rebuild a principal groupoid and its twist from admissible pairs.
    Weyl {
        file: PathBuf,
        /// Draw pair phases from μ_q.
        #[arg(long)]
        phase_order: Option<u64>,
    },
    /// Rotation cocycles on ℤ_N² or Følner boxes on ℤ².
    Nctorus {
        /// k/N for the ℤ_N² quotient, or a real θ with --folner.
        #[arg(long)]
        theta: String,
        /// Box radii, e.g. 4,8,16.
        #[arg(long, value_delimiter = ',')]
        folner: Option<Vec<usize>>,
    },
    /// Operator p-norm of a matrix file {"matrix": [[re or [re, im]]]}.
    Pnorm { file: PathBuf },
    /// Invertible isometries in the double commutant of λ^σ(G).
    Isometries { file: PathBuf },
    /// The C*-core A_h + iA_h of a groupoid algebra.
    Core { file: PathBuf },
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    Exponent::parse(s).map_err(|e| e.to_string())
}

fn parse_theta(theta: &str, folner: Option<Vec<usize>>) -> Result<TorusMode, CliError> {
    let bad = || CliError::Config(format!("bad theta {theta:?}"));
    let fraction = match theta.split_once('/') {
        Some((k, n)) => {
            Some((k.trim().parse::<i64>().map_err(|_| bad())?, n.trim().parse::<usize>().map_err(|_| bad())?))
        }
        None => None,
    };
    match (folner, fraction) {
        (Some(radii), Some((k, n))) => {
            if n == 0 {
                return Err(CliError::Core("bad rotation parameter: denominator 0".into()));
            }
            Ok(TorusMode::Folner { theta: k as f64 / n as f64, radii })
        }
        (Some(radii), None) => Ok(TorusMode::Folner { theta: theta.trim().parse().map_err(|_| bad())?, radii }),
        (None, Some((k, n))) => Ok(TorusMode::Quotient { k, n }),
        (None, None) => Err(CliError::Config("the quotient model needs theta as k/N".into())),
    }
}

fn config(cli: Cli) -> Result<ExperimentConfig, CliError> {
    let g = cli.global;
    let (command, inputs, phase_order, torus) = match cli.command {
        Sub::Validate { files } => (Command::Validate, files, None, None),
        Sub::Rigidity { a, b } => (Command::Rigidity, vec![a, b], None, None),
        Sub::Weyl { file, phase_order } => (Command::Weyl, vec![file], phase_order, None),
        Sub::Nctorus { theta, folner } => (Command::Nctorus, vec![], None, Some(parse_theta(&theta, folner)?)),
        Sub::Pnorm { file } => (Command::Pnorm, vec![file], None, None),
        Sub::Isometries { file } => (Command::Isometries, vec![file], None, None),
        Sub::Core { file } => (Command::Core, vec![file], None, None),
    };
    let mut cfg = ExperimentConfig::new(command);
    cfg.inputs = inputs;
    cfg.p = g.p;
    cfg.seed = g.seed;
    cfg.tol = g.tol;
    cfg.starts = g.starts;
    cfg.format = match g.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    cfg.out = g.out;
    cfg.timing = g.timing;
    cfg.search_order = g.search_order;
    cfg.phase_order = phase_order;
    cfg.torus = torus;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let cfg = config(cli)?;
    let report = commands::run(&cfg)?;
    let text = report.render(cfg.format)?;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?
        }
        None => print!("{text}"),
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
