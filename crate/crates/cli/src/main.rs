//! `jres`: forward and inverse resonance computations for finitely perturbed
//! Jacobi operators.
//!
//! ```text
//! jres forward q.json -o spectrum.json
//! jres inverse --mode resonances spectrum.json
//! jres sweep --model step --p 3 --h-from -6 --h-to 6 --steps 241 -o step.csv
//! jres repro 3
//! ```
//!
//! Exit codes: 0 success, 2 malformed input, 3 failed integrity check,
//! 4 rejected or inconsistent data.

mod commands;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jres_core::{ErrorClass, JresError, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "jres", version, about = "Jost functions, resonances and their inversion")]
struct Cli {
    /// Verification tolerance for identity and round-trip checks.
    #[arg(long, global = true, env = "JR_TOL")]
    tol: Option<f64>,

    /// Output file; standard output when omitted.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Jost function, bound states, resonances, phase endpoints and bounds.
    Forward { input: PathBuf },
    /// Spectra of the truncation and of its two rank-one modifications.
    Spectrum { input: PathBuf },
    /// Recover the perturbation from resonances, omega or alpha spectra.
    Inverse {
        #[arg(long, value_enum, default_value_t = Mode::Resonances)]
        mode: Mode,
        input: PathBuf,
    },
    /// Check a candidate root set for admissibility.
    Validate { input: PathBuf },
    /// Forbidden-region radii and multiplicity caps.
    Bounds { input: PathBuf },
    /// Scattering phase sampled along the lower semicircle.
    Phase {
        input: PathBuf,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// CSV of roots and spectra along a parameter grid.
    Sweep {
        #[arg(long, value_enum, default_value_t = ModelArg::Step)]
        model: ModelArg,
        /// Coupling of the scaled model.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        h_from: f64,
        #[arg(long, allow_hyphen_values = true)]
        h_to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Re-run one of the built-in worked examples.
    Repro {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        id: u8,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Resonances,
    Omega,
    Alphas,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Step,
    Scaled,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(JresError),
}

impl From<JresError> for CliError {
    fn from(e: JresError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Integrity => 3,
                ErrorClass::Validation => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match cli.tol {
        Some(t) if t.is_finite() && t > 0.0 => Tolerances::with_verification(t),
        Some(t) => {
            eprintln!("jres: tolerance must be positive, got {t}");
            return ExitCode::from(2);
        }
        None => Tolerances::default(),
    };
    let out = cli.output.as_deref();
    let result = match cli.command {
        Command::Forward { input } => commands::forward(&input, out, &tol),
        Command::Spectrum { input } => commands::spectrum(&input, out),
        Command::Inverse { mode, input } => commands::inverse(mode, &input, out, &tol),
        Command::Validate { input } => commands::validate(&input, out, &tol),
        Command::Bounds { input } => commands::bounds(&input, out, &tol),
        Command::Phase { input, samples } => commands::phase(&input, samples, out, &tol),
        Command::Sweep {
            model,
            kappa,
            p,
            h_from,
            h_to,
            steps,
        } => commands::sweep(model, kappa, p, h_from, h_to, steps, out, &tol),
        Command::Repro { id } => commands::repro(id, out, &tol),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("jres: {e}");
            ExitCode::from(e.code())
        }
    }
}
