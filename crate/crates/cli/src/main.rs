//! `riccati`: run the worked scenarios and the acceptance suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nonlocal_riccati::diagnostics::summary_text;
use nonlocal_riccati::direct::NonlinearStep;
use nonlocal_riccati::linalg;
use nonlocal_riccati::scenario::{run_scenario, ScenarioConfig, ScenarioKind};
use nonlocal_riccati::suite::{run_all, THRESHOLD_ENV};
use nonlocal_riccati::Error;

const THREADS_ENV: &str = "RICCATI_THREADS";

const EXIT_THRESHOLD: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "riccati", version, about = "Riccati solutions of nonlocal PDEs checked against direct simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nonlocal reaction–diffusion system
    Rd(ScenarioArgs),
    /// Nonlocal KdV-type equation
    Kdv(ScenarioArgs),
    /// Cubic nonlocal NLS
    Nls(ScenarioArgs),
    /// Fourth-order sinusoidal nonlocal NLS
    Nls4(ScenarioArgs),
    /// Convolutional PDE on the line
    Conv(ScenarioArgs),
    /// Nonlocal FKPP on the line
    Fkpp(ScenarioArgs),
    /// Every scenario at its defaults plus the property suite
    #[command(name = "run_all", alias = "run-all")]
    RunAll(RunAllArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StepArg {
    Euler,
    Exp,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Domain length
    #[arg(long = "L")]
    length: Option<f64>,
    /// Nodes per dimension (power of two)
    #[arg(long = "M")]
    nodes: Option<usize>,
    /// Horizon
    #[arg(long = "T")]
    t_end: Option<f64>,
    /// Direct-solver time step
    #[arg(long)]
    dt: Option<f64>,
    /// Gaussian coupling width (rd only)
    #[arg(long)]
    sigma: Option<f64>,
    /// Output directory
    #[arg(long)]
    output: Option<PathBuf>,
    /// Number of determinant/norm trace samples
    #[arg(long)]
    trace_samples: Option<usize>,
    /// NLS nonlinear substep
    #[arg(long, value_enum)]
    nonlinear_step: Option<StepArg>,
    /// File of `key=value` overrides, applied before the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunAllArgs {
    /// Output directory
    #[arg(long, default_value = "out")]
    output: PathBuf,
}

impl ScenarioArgs {
    fn resolve(&self, kind: ScenarioKind) -> Result<ScenarioConfig, Error> {
        let mut cfg = ScenarioConfig::defaults(kind);
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(v) = self.length {
            cfg.length = v;
        }
        if let Some(v) = self.nodes {
            cfg.nodes = v;
        }
        if let Some(v) = self.t_end {
            cfg.t_end = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = self.sigma {
            cfg.sigma = v;
        }
        if let Some(v) = &self.output {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = self.trace_samples {
            cfg.trace_samples = v;
        }
        if let Some(v) = self.nonlinear_step {
            cfg.nonlinear_step = match v {
                StepArg::Euler => NonlinearStep::Euler,
                StepArg::Exp => NonlinearStep::Exp,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Config(_) | Error::InvalidGrid(_) | Error::InvalidStepper(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got {value:?}")))?;
    linalg::set_threads(n);
    Ok(())
}

fn run(cli: Cli) -> Result<u8, (String, Error)> {
    configure_threads().map_err(|e| ("configuration".to_string(), e))?;
    let (kind, args) = match cli.command {
        Command::Rd(a) => (ScenarioKind::Rd, a),
        Command::Kdv(a) => (ScenarioKind::Kdv, a),
        Command::Nls(a) => (ScenarioKind::Nls, a),
        Command::Nls4(a) => (ScenarioKind::Nls4, a),
        Command::Conv(a) => (ScenarioKind::Conv, a),
        Command::Fkpp(a) => (ScenarioKind::Fkpp, a),
        Command::RunAll(a) => {
            let overrides = std::env::var(THRESHOLD_ENV).ok();
            let outcome = run_all(&a.output, overrides.as_deref()).map_err(|e| ("run_all".to_string(), e))?;
            print!("{}", outcome.table());
            return Ok(if outcome.passed() { 0 } else { EXIT_THRESHOLD });
        }
    };
    let cfg = args.resolve(kind).map_err(|e| (kind.to_string(), e))?;
    let report = run_scenario(&cfg).map_err(|e| (kind.to_string(), e))?;
    print!("{}", summary_text(&report));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((context, e)) => {
            eprintln!("error: {context}: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
