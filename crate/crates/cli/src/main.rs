//! `diracgraph`: Dirac operators of graph clique complexes from the command line.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "diracgraph", version, about = "Dirac operators of graph clique complexes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Relative tolerance for numerical kernels.
    #[arg(long, global = true, default_value_t = diracgraph::linalg::DEFAULT_KERNEL_TOL)]
    pub tol: f64,
    /// Seed for randomized commands.
    #[arg(long, global = true, env = "DIRACGRAPH_SEED")]
    pub seed: Option<u64>,
    /// Truncate the clique complex above this dimension.
    #[arg(long = "max-dim", global = true)]
    pub max_dim: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Real,
    Complex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Complex, Euler characteristic, Betti numbers, spectra, Det(D) and torsion.
    Analyze { input: PathBuf },
    /// Betti numbers and Hodge Laplacian spectra by degree.
    Cohomology { input: PathBuf },
    /// Vertex curvatures and their sum.
    Curvature { input: PathBuf },
    /// Poincaré–Hopf indices of an injective vertex function.
    Morse {
        input: PathBuf,
        /// Comma-separated function values in vertex-id order; otherwise a random ordering from --seed.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// Eigenvalues of D and of each Laplacian block.
    Spectrum { input: PathBuf },
    /// Dirac zeta function at s.
    Zeta {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Imaginary part of s.
        #[arg(long = "s-im", default_value_t = 0.0, allow_hyphen_values = true)]
        s_im: f64,
    },
    /// Spectral distance of two graphs on the same vertex set.
    Distance { first: PathBuf, second: PathBuf },
    /// Magnitude of the distance matrix.
    Magnitude { input: PathBuf },
    /// Spanning trees of the graph and of its simplex graph.
    Trees { input: PathBuf },
    /// Lax isospectral deformation; CSV trajectory in text mode.
    Deform {
        input: PathBuf,
        #[arg(long = "T", default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, value_enum, default_value_t = Variant::Real)]
        variant: Variant,
        /// Keep a full (d, b) snapshot every N accepted steps.
        #[arg(long = "snapshot-every")]
        snapshot_every: Option<usize>,
        /// File for the JSON snapshots (required with --snapshot-every in text mode).
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Automorphisms with Lefschetz numbers and fixed simplices.
    Lefschetz {
        input: PathBuf,
        /// Evaluate each Lefschetz zeta function at this real z.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<f64>,
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
    /// Inductive dimension.
    Dimension { input: PathBuf },
    /// Greedy homotopy reduction.
    Contract { input: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] diracgraph::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use diracgraph::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::Parse { .. } | E::UnknownVertex(_) | E::Argument(_) => 1,
                E::Capacity { .. } => 3,
                _ => 2,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if !(cli.global.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let text = commands::dispatch(&cli.global, &cli.command)?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "stdout".into(), source })
        }
    }
}
