//! Experiment configuration, the transfer and probability experiments,
//! report encoding and the command-line front end.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod report;

use thiserror::Error;

pub use config::{Ensemble, ExperimentConfig, ReportFormat};
pub use experiment::{run_probability_check, run_transfer_experiment, trial_seed};
pub use report::{read_report, write_report, ProbabilityReport, TransferRecord, TransferReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Numeric(#[from] crate::error::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error in {path}: {message}")]
    Schema { path: String, message: String },

    #[error("could not encode report: {0}")]
    Serialize(String),
}
