//! Command-line front end: solvers, passivity certificates, perturbation
//! experiments and region datasets, with JSON/CSV artifacts and run manifests.

mod commands;
mod error;
mod io;
mod manifest;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use hamriccati::Tolerances;
use log::{error, warn, LevelFilter};

use commands::perturb::{Mode as PerturbMode, PerturbArgs};
use commands::solve::Mode as SolveMode;
use commands::{Context, Output};
use error::CliError;

#[derive(Parser)]
#[command(name = "hamriccati", version, about = "Riccati equations, passivity and Hamiltonian perturbation experiments")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Relative tolerance for Riccati residuals and Loewner comparisons [default: 1e-8]
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Relative half-width of the imaginary-axis band [default: 1e-8]
    #[arg(long, global = true, value_name = "FLOAT")]
    imag_tol: Option<f64>,
    /// Output file; stdout when omitted. CSV outputs get a `<out>.manifest.json` sidecar.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Riccati equation for a problem file.
    #[command(group(ArgGroup::new("mode").args(["extremal", "structured", "verify"])))]
    Solve {
        problem: PathBuf,
        /// Minimal and maximal solutions (the default)
        #[arg(long)]
        extremal: bool,
        /// Block-wise construction of a positive definite solution (requires stable F)
        #[arg(long)]
        structured: bool,
        /// Check a candidate X against the Riccati inequality
        #[arg(long, value_name = "X_FILE")]
        verify: Option<PathBuf>,
        /// Read A, B, C, D and form the passivity Riccati data
        #[arg(long)]
        state_space: bool,
    },
    /// Certify passivity of a state-space system and build a port-Hamiltonian realization.
    Passivity {
        system: PathBuf,
        /// Also write the realization to this file
        #[arg(long, value_name = "PATH")]
        ph_out: Option<PathBuf>,
    },
    /// Spectra of H + tJΔ, the first axis crossing, or a vertex search.
    #[command(group(ArgGroup::new("mode").args(["t_grid", "critical", "vertex"]).required(true)))]
    Perturb {
        problem: PathBuf,
        delta: PathBuf,
        /// Eigenvalues with axis-cluster inertia over t0:t1:steps (CSV)
        #[arg(long, value_name = "SPEC")]
        t_grid: Option<String>,
        /// First t at which an eigenvalue reaches the imaginary axis
        #[arg(long)]
        critical: bool,
        /// Follow the region boundary to a vertex, seeded with the given Δ₁₁
        #[arg(long)]
        vertex: bool,
        /// Seed for the random directions of later vertex legs
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of vertex legs
        #[arg(long, default_value_t = 8)]
        budget: usize,
        /// Scan limit when no boundedness bound applies
        #[arg(long, default_value_t = 1e6)]
        t_max: f64,
        /// Samples per vertex leg, including both ends
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Region membership of Δ₁₁ = [[a, c], [c, b]] over a grid (CSV).
    Region {
        problem: PathBuf,
        /// a0:a1:na,b0:b1:nb,c0:c1:nc
        #[arg(long, default_value = commands::region::DEFAULT_GRID)]
        grid: String,
    },
}

fn init_logging() {
    let raw = std::env::var("HAMRICCATI_LOG").unwrap_or_default();
    let level = match raw.as_str() {
        "quiet" => LevelFilter::Off,
        "info" => LevelFilter::Info,
        "debug" => LevelFilter::Debug,
        _ => LevelFilter::Warn,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    if !raw.is_empty() && !matches!(raw.as_str(), "quiet" | "info" | "debug") {
        log::warn!("HAMRICCATI_LOG={raw} not recognized; expected quiet, info or debug");
    }
}

fn context(g: &GlobalArgs) -> Result<Context, CliError> {
    let mut tol = Tolerances::<f64>::default();
    let mut overrides = BTreeMap::new();
    for (name, value) in [("tol", g.tol), ("imag_tol", g.imag_tol)] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::input(format!("--{} must be a positive number, got {v}", name.replace('_', "-"))));
            }
            overrides.insert(name.to_string(), v);
        }
    }
    if let Some(v) = g.tol {
        tol.residual = v;
        tol.loewner = v;
    }
    if let Some(v) = g.imag_tol {
        tol.imag = v;
    }
    Ok(Context { tol, overrides, out: g.out.clone() })
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write(ctx: &Context, output: Output) -> Result<(), CliError> {
    match output {
        Output::Json(v) => io::emit(ctx.out.as_deref(), &io::pretty(&v)),
        Output::Csv { bytes, manifest } => {
            io::emit(ctx.out.as_deref(), &bytes)?;
            if let Some(out) = &ctx.out {
                io::emit(Some(&sidecar(out)), &io::pretty(&manifest.to_json()))?;
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = context(&cli.global)?;
    let output = match cli.command {
        Command::Solve { problem, structured, verify, state_space, .. } => {
            let mode = match (structured, verify) {
                (true, _) => SolveMode::Structured,
                (_, Some(x)) => SolveMode::Verify(x),
                _ => SolveMode::Extremal,
            };
            commands::solve::run(&ctx, problem, mode, state_space)
        }
        Command::Passivity { system, ph_out } => commands::passivity::run(&ctx, system, ph_out),
        Command::Perturb { problem, delta, t_grid, critical: _, vertex, seed, budget, t_max, samples } => {
            let mode = match (t_grid, vertex) {
                (Some(spec), _) => PerturbMode::TGrid(spec),
                (None, true) => PerturbMode::Vertex,
                (None, false) => PerturbMode::Critical,
            };
            if !(t_max.is_finite() && t_max > 0.0) {
                return Err(CliError::input(format!("--t-max must be a positive number, got {t_max}")));
            }
            commands::perturb::run(&ctx, PerturbArgs { problem, delta, mode, seed, budget, t_max, samples })
        }
        Command::Region { problem, grid } => commands::region::run(&ctx, problem, grid),
    };
    match output {
        Ok(o) => write(&ctx, o),
        Err(CliError::NoSolution { message, report }) => {
            // the evidence is part of the contract, so the report is still written
            write(&ctx, Output::Json(report.clone()))?;
            Err(CliError::NoSolution { message, report })
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::NoSolution { .. }) => {
            warn!("{e}");
            e.exit_code()
        }
        Err(e) => {
            error!("{e}");
            e.exit_code()
        }
    }
}
