//! `elastica`: command-line front end to the elastica library.

mod commands;
mod record;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "elastica", version, about = "Euler elastica: closed forms, energies, integration and minimization")]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Random seed; overrides a `seed` key in a problem file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for seed sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Only the config echo is written to standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Linear,
    Wavelike,
    Borderline,
    Orbitlike,
    Circular,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Figure-eight constants.
    Constants,
    /// Sample a planar elastica from its closed form.
    Sample {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Elliptic parameter for wavelike and orbitlike curves.
        #[arg(long)]
        m: Option<f64>,
        /// Number of edges.
        #[arg(long = "N", alias = "n", default_value_t = 1024)]
        n: usize,
        /// Number of curvature periods, starting at s = 0.
        #[arg(long, conflicts_with = "range")]
        periods: Option<f64>,
        /// Parameter range `a,b`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<(f64, f64)>,
    },
    /// Length, bending energy and total curvature of a curve CSV.
    Energy {
        /// Curve CSV, or `-` for standard input.
        input: PathBuf,
    },
    /// Li–Yau type inequality check; exit code 0 iff satisfied.
    Liyau {
        input: PathBuf,
        /// Multiplicity radius; defaults to 1e-3 times the length.
        #[arg(long)]
        eps: Option<f64>,
        /// Relative discretization allowance.
        #[arg(long, default_value_t = elastica::discrete::DEFAULT_TOL_DISC)]
        tol_disc: f64,
    },
    /// Minimize bending energy for a pinned or clamped problem file.
    Minimize {
        problem: PathBuf,
        /// JSON-lines convergence log; defaults to `<out>.log.jsonl` with
        /// `--out`, otherwise standard error.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Integrate the elastica equation from an initial-condition file.
    Integrate { ic: PathBuf },
    /// Build an r-leafed elastica.
    Leafed {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Samples per leaf.
        #[arg(long = "N", alias = "n", default_value_t = 1024)]
        n: usize,
    },
    /// Classify a closed planar curve.
    Classify {
        input: PathBuf,
        #[arg(long, default_value_t = elastica::curves::CLASSIFY_TOL)]
        tol: f64,
    },
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or("expected `a,b`")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(format!("need finite a < b, got {a},{b}"));
    }
    Ok((a, b))
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Internal(String),
    /// Exit 2.
    Input(String),
    /// Exit 3.
    Infeasible(String),
    /// Exit 3 without a diagnostic; the result was already written.
    Unsatisfied,
}

impl From<elastica::Error> for Failure {
    fn from(e: elastica::Error) -> Self {
        use elastica::Error as E;
        match e {
            E::Infeasible(_) => Failure::Infeasible(e.to_string()),
            E::Domain(_) | E::Parse(_) | E::StepRejected { .. } => Failure::Input(e.to_string()),
            E::Indeterminate(_) => Failure::Internal(e.to_string()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Input(_) => 2,
            Failure::Infeasible(_) | Failure::Unsatisfied => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Internal(m) => eprintln!("error: {m}"),
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Infeasible(m) => eprintln!("{m}"),
                Failure::Unsatisfied => {}
            }
            let _ = std::io::stderr().flush();
            ExitCode::from(f.code())
        }
    }
}
