//! `decoherence-lab` command line.
//!
//! Exit codes: 0 when every asserted gap is within its threshold, 1 when an
//! assertion fails, 2 on usage or I/O errors.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{Ensemble, ExperimentConfig, ReportFormat};
use super::experiment::{run_probability_check, run_transfer_experiment};
use super::report::{read_report, write_probability_report, write_report};
use super::HarnessError;
use crate::coherence::MeasureKind;
use crate::tolerances::ROC_DEFAULT_TOL;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "decoherence-lab", version, about = "Coherence transfer to the environment under dephasing measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare coherence of sampled states with their post-measurement environment states.
    Run(RunArgs),
    /// Compare outcome probabilities of the purified measurement with the populations.
    CheckProbabilities(RunArgs),
    /// Print the max-gap table of a JSON report.
    Summarize {
        /// JSON report written by `run`.
        report: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Comma-separated subset of l1, rel-entropy, wy, roc.
    #[arg(long, value_delimiter = ',', default_value = "l1,rel-entropy,wy")]
    pub measures: Vec<String>,
    /// ginibre, haar-pure or maximally-coherent.
    #[arg(long, default_value = "ginibre")]
    pub ensemble: String,
    #[arg(long, default_value_t = ROC_DEFAULT_TOL)]
    pub roc_tol: f64,
    /// json or csv.
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Output path; `-` writes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn to_config(&self) -> Result<ExperimentConfig, HarnessError> {
        let measures = self
            .measures
            .iter()
            .map(|m| m.parse::<MeasureKind>().map_err(|e| HarnessError::Config(e.to_string())))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let cfg = ExperimentConfig {
            dims: self.dims.clone(),
            trials_per_dim: self.trials,
            seed: self.seed,
            measures,
            ensemble: self.ensemble.parse::<Ensemble>()?,
            roc_tol: self.roc_tol,
            output_path: self.out.clone().unwrap_or_else(|| PathBuf::from("report.json")),
            format: self.format.parse::<ReportFormat>()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_ASSERTION,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command) -> Result<bool, HarnessError> {
    match command {
        Command::Run(args) => {
            let cfg = args.to_config()?;
            let report = run_transfer_experiment(&cfg)?;
            write_report(&report, &cfg.output_path, cfg.format)?;
            if cfg.output_path.as_os_str() != "-" {
                print!("{}", report.summary_table());
            }
            Ok(report.passed())
        }
        Command::CheckProbabilities(args) => {
            let cfg = args.to_config()?;
            let report = run_probability_check(&cfg)?;
            if let Some(out) = &args.out {
                write_probability_report(&report, out, cfg.format)?;
            }
            if args.out.as_deref().is_none_or(|p| p.as_os_str() != "-") {
                print!("{}", report.summary_table());
            }
            Ok(report.passed())
        }
        Command::Summarize { report } => {
            let report = read_report(&report)?;
            print!("{}", report.summary_table());
            Ok(report.passed())
        }
    }
}
