//! Scenario files, the built-in catalog, JSON reports and the acceptance
//! suite behind the `arithext` binary.

pub mod catalog;
pub mod report;
pub mod scenario;
pub mod suite;

use serde::{Deserialize, Serialize};

pub use report::{run_scenario, PredicateOutcome, Report};
pub use scenario::{parse_scenario, parse_scenario_json, parse_scenario_toml, Scenario};

/// Tolerances and seeds shared by every run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub tol_structural: f64,
    pub tol_quadrature: f64,
    /// Distance to `2πiℤ` below which a value counts as a period.
    pub tol_root: f64,
    pub seed: u64,
    pub points: usize,
    pub nmax_torsion: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol_structural: 1e-10,
            tol_quadrature: 1e-6,
            tol_root: 1e-9,
            seed: arithext::forms::cover::DEFAULT_SEED,
            points: arithext::forms::cover::DEFAULT_POINTS,
            nmax_torsion: arithext::tori::DEFAULT_NMAX,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<arithext::Error> for CliError {
    fn from(e: arithext::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
