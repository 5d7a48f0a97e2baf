use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "logos-entangle",
    version,
    about = "Power-graph and orthodox analysis of finite-dimensional quantum states"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Tolerance for the relation checks (spectra, conditional purity, orthogonality).
    #[arg(long, global = true, value_name = "EPS")]
    pub tol: Option<f64>,
    /// Number of Haar-seeded bases added to the context family.
    #[arg(long = "family-haar", global = true, value_name = "N")]
    pub family_haar: Option<usize>,
    /// Seed for the context family and for sampling.
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with a `[tolerances]` table and optional `family_haar`, `seed`, `format`.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strong / weak / separable classification next to the orthodox diagnostics.
    Classify {
        /// Bipartite state file.
        state: PathBuf,
    },
    /// Search for a global binary valuation on the commutation graph of a projector set.
    Ks {
        /// Projector-set file (list of unit vectors).
        projectors: PathBuf,
    },
    /// CHSH value, classical bound check and optional outcome simulation.
    Chsh {
        state: PathBuf,
        /// Settings file with observables a0, a1, b0, b1.
        #[arg(long, value_name = "FILE", conflicts_with = "optimal")]
        settings: Option<PathBuf>,
        /// Maximize over qubit measurement directions.
        #[arg(long)]
        optimal: bool,
        /// Simulated shots per setting; 0 skips the simulation.
        #[arg(long, default_value_t = 0, value_name = "N")]
        shots: u64,
    },
    /// Born-rule potentia of a state on every node of a projector set.
    Psa { state: PathBuf, projectors: PathBuf },
    /// Rebuild a density operator from a PSA dump.
    Reconstruct {
        /// PSA file: the JSON dump of `psa`, or its CSV dump together with `--projectors`.
        psa: PathBuf,
        #[arg(long, value_name = "FILE")]
        projectors: Option<PathBuf>,
    },
}
