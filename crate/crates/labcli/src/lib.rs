//! Experiment harness for refueling station siting: budget, range and
//! initial-fuel sweeps, Monte-Carlo scoring, probability ablation, catalog
//! and model export.

use afs_core::coverage::CoverageError;
use afs_core::dataset::DatasetError;
use afs_core::netgraph::{NetworkError, PathError};
use afs_core::refuel::RefuelError;
use thiserror::Error;

pub mod commands;
pub mod spec;

pub use commands::{
    cmd_export, cmd_monte_carlo_sof, cmd_paths, cmd_prob_ablation, cmd_solve, cmd_sweep_range, cmd_sweep_sof,
};
pub use spec::{ExperimentSpec, Solver};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Validation(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    /// Process exit code: 2 for bad input, 3 for solver failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Validation(_) => 2,
            LabError::Solver(_) => 3,
            LabError::Io(_) => 1,
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),*) => {
        $(impl From<$t> for LabError {
            fn from(e: $t) -> Self {
                LabError::Validation(e.to_string())
            }
        })*
    };
}

validation_from!(NetworkError, PathError, CoverageError, RefuelError, DatasetError);

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Io(e.into())
    }
}
