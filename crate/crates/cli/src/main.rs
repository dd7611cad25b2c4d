//! `ktops` — experiment runners for the coupled-kicked-tops laboratory.
//!
//! Subcommands: `evolve` (entropy saturation of an evolving state),
//! `eigenstates` (spectral-average entanglement over a Q sweep),
//! `rdm-spectrum` (pooled RDM eigenvalue histograms vs the analytic
//! density), `theory` (the analytic table), and `nnsd` (eigenangle
//! spacing statistics). Each run writes a CSV with a `#` metadata header
//! and a companion `.json` summary.

mod output;
mod runners;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ktops", version, about = "Coupled kicked tops and the random-matrix statistics of their entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve an initial state under the kicked-top map and record the
    /// entanglement entropies per kick.
    ///
    /// CSV columns: t, s_v, s_r. The JSON summary carries the plateau
    /// statistics (mean and standard deviation over the window starting
    /// at --plateau-start, default steps/2) and the reference values
    /// ln(0.6N), ln(N), 1-2/N, 1-1/N.
    Evolve(EvolveArgs),

    /// Diagonalize the map for each Q = M/N in --q-list and average the
    /// eigenstate entanglement, with the analytic curve and matching
    /// random-state Monte Carlo alongside.
    ///
    /// CSV columns: q, n_dim, m_dim, total_dim, alpha, sv_eigenstates,
    /// sv_se, sr_eigenstates, sr_se, gamma, ln_gamma_n, sr_theory,
    /// mc_sv, mc_sv_se, mc_sr, mc_sr_se (one row per Q, two per Q with
    /// --compare-parity).
    Eigenstates(EigenstatesArgs),

    /// Pool the RDM eigenvalues of all eigenstates and of a random-state
    /// Monte Carlo sample into histograms aligned with the analytic
    /// density.
    ///
    /// CSV columns: bin_lo, bin_hi, eigenstate_density,
    /// montecarlo_density, theory_density. The JSON summary reports the
    /// l1 distances and out-of-support fractions.
    RdmSpectrum(RdmSpectrumArgs),

    /// Evaluate the analytic quantities only: gamma(Q), ln(gamma N), the
    /// support endpoints of the eigenvalue density, and the mean linear
    /// entropy.
    ///
    /// CSV columns: q, gamma, ln_gamma_n, sv_quadrature, lambda_min,
    /// lambda_max, sr_mean.
    Theory(TheoryArgs),

    /// Nearest-neighbor spacing distribution of the Floquet eigenangles,
    /// unfolded on the circle, against the Wigner surmise.
    ///
    /// CSV columns: s_lo, s_hi, empirical_density, wigner_density; raw
    /// spacings go to <out-stem>_spacings.csv. The JSON summary carries
    /// the KS distance and mean spacing.
    Nnsd(NnsdArgs),
}

#[derive(Args)]
pub struct EvolveArgs {
    /// Spin of the first top (half-integers allowed)
    #[arg(long, default_value_t = 10.0)]
    pub j1: f64,
    /// Spin of the second top
    #[arg(long, default_value_t = 10.0)]
    pub j2: f64,
    /// Kick strength k
    #[arg(long, default_value_t = 3.0)]
    pub k: f64,
    /// Coupling strength epsilon
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Parity-breaking phase of the first top
    #[arg(long, default_value_t = 0.47)]
    pub alpha1: f64,
    /// Parity-breaking phase of the second top
    #[arg(long, default_value_t = 0.47)]
    pub alpha2: f64,
    /// Number of kicks
    #[arg(long, default_value_t = 4000)]
    pub steps: usize,
    /// Initial state: "product" (coherent x coherent) or "entangled"
    #[arg(long, default_value = "product")]
    pub initial: String,
    /// Coherent-state colatitude (product initial state)
    #[arg(long, default_value_t = 2.6)]
    pub theta: f64,
    /// Coherent-state azimuth (product initial state)
    #[arg(long, default_value_t = 0.8)]
    pub phi: f64,
    /// First step of the plateau window (default: steps/2)
    #[arg(long)]
    pub plateau_start: Option<usize>,
    /// Random seed (echoed into metadata; this runner is deterministic)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Refuse total dimensions above this cap
    #[arg(long, default_value_t = 4000)]
    pub dim_cap: usize,
}

#[derive(Args)]
pub struct EigenstatesArgs {
    /// Spin of the first top; N = 2 j1 + 1 stays fixed across the sweep
    #[arg(long, default_value_t = 6.0)]
    pub j1: f64,
    /// Kick strength k
    #[arg(long, default_value_t = 9.0)]
    pub k: f64,
    /// Coupling strength epsilon
    #[arg(long, default_value_t = 10.0)]
    pub epsilon: f64,
    /// Parity-breaking phase (both tops)
    #[arg(long, default_value_t = 0.47)]
    pub alpha: f64,
    /// Comma-separated list of Q = M/N values (each Q*N must be integral)
    #[arg(long, default_value = "1,2,3,4", value_delimiter = ',')]
    pub q_list: Vec<f64>,
    /// Monte Carlo trials for the companion random-state means
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    /// Random-state ensemble: real or complex
    #[arg(long, default_value = "real")]
    pub ensemble: String,
    /// Random seed for the Monte Carlo companion
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also run every Q with alpha = 0 (parity unbroken)
    #[arg(long)]
    pub compare_parity: bool,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Refuse total dimensions above this cap
    #[arg(long, default_value_t = 4000)]
    pub dim_cap: usize,
}

#[derive(Args)]
pub struct RdmSpectrumArgs {
    /// Spin of the first top
    #[arg(long, default_value_t = 16.0)]
    pub j1: f64,
    /// Spin of the second top
    #[arg(long, default_value_t = 16.0)]
    pub j2: f64,
    /// Kick strength k
    #[arg(long, default_value_t = 9.0)]
    pub k: f64,
    /// Coupling strength epsilon
    #[arg(long, default_value_t = 10.0)]
    pub epsilon: f64,
    /// Parity-breaking phase of the first top
    #[arg(long, default_value_t = 0.47)]
    pub alpha1: f64,
    /// Parity-breaking phase of the second top
    #[arg(long, default_value_t = 0.47)]
    pub alpha2: f64,
    /// Monte Carlo trials for the random-state histogram
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// Histogram bins over [0, 1.2 lambda_max]
    #[arg(long, default_value_t = 60)]
    pub bins: usize,
    /// Random-state ensemble: real or complex
    #[arg(long, default_value = "real")]
    pub ensemble: String,
    /// Random seed for the Monte Carlo histogram
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Refuse total dimensions above this cap
    #[arg(long, default_value_t = 4000)]
    pub dim_cap: usize,
}

#[derive(Args)]
pub struct TheoryArgs {
    /// Comma-separated list of Q = M/N values (Q >= 1)
    #[arg(long, default_value = "1,1.5,2,4,8,32", value_delimiter = ',')]
    pub q_list: Vec<f64>,
    /// Subsystem dimension N
    #[arg(long, default_value_t = 33)]
    pub n_dim: usize,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct NnsdArgs {
    /// Spin of the first top
    #[arg(long, default_value_t = 12.0)]
    pub j1: f64,
    /// Spin of the second top
    #[arg(long, default_value_t = 13.0)]
    pub j2: f64,
    /// Kick strength k
    #[arg(long, default_value_t = 9.0)]
    pub k: f64,
    /// Coupling strength epsilon
    #[arg(long, default_value_t = 10.0)]
    pub epsilon: f64,
    /// Parity-breaking phase of the first top
    #[arg(long, default_value_t = 0.47)]
    pub alpha1: f64,
    /// Parity-breaking phase of the second top
    #[arg(long, default_value_t = 0.47)]
    pub alpha2: f64,
    /// Spacing-histogram bins over [0, 4]
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    /// Split the spectrum into parity sectors before unfolding
    /// (recommended whenever alpha1 = alpha2 = 0)
    #[arg(long)]
    pub split_parity: bool,
    /// Replace the kicked-top spectrum by a diagnostic one:
    /// "picket" (equally spaced) or "poisson" (seeded uniform angles)
    #[arg(long)]
    pub control: Option<String>,
    /// Random seed (used by the poisson control)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Refuse total dimensions above this cap
    #[arg(long, default_value_t = 4000)]
    pub dim_cap: usize,
}

/// Runner-level failure, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// exit 2
    Usage(String),
    /// exit 3
    DimCap { dim: usize, cap: usize },
    /// exit 4
    Numerical(String),
    /// exit 1
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(msg) => write!(f, "{}", msg),
            Self::DimCap { dim, cap } => write!(
                f,
                "total dimension {} exceeds the cap {}; raise --dim-cap if you mean it",
                dim, cap
            ),
            Self::Numerical(msg) => write!(f, "numerical failure: {}", msg),
            Self::Io(e) => write!(f, "i/o failure: {}", e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::DimCap { .. } => 3,
            Self::Numerical(_) => 4,
            Self::Io(_) => 1,
        }
    }
}

impl From<ktops_core::Error> for CliError {
    fn from(e: ktops_core::Error) -> Self {
        use ktops_core::Error::*;
        match e {
            EigNonConvergence(_) | QuadratureNonConvergence { .. } | SeriesNonConvergence(_) => {
                Self::Numerical(e.to_string())
            }
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evolve(args) => runners::run_evolve(&args),
        Command::Eigenstates(args) => runners::run_eigenstates(&args),
        Command::RdmSpectrum(args) => runners::run_rdm_spectrum(&args),
        Command::Theory(args) => runners::run_theory(&args),
        Command::Nnsd(args) => runners::run_nnsd(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}
