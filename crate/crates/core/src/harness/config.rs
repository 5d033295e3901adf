use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::coherence::MeasureKind;
use crate::numkernel::max_joint_dim;
use crate::states::MAX_STATE_DIM;
use crate::tolerances::{ROC_DEFAULT_TOL, ROC_TOL_RANGE};

/// Population the experiment draws its states from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    Ginibre,
    HaarPure,
    MaximallyCoherent,
}

impl Ensemble {
    pub fn as_str(self) -> &'static str {
        match self {
            Ensemble::Ginibre => "ginibre",
            Ensemble::HaarPure => "haar-pure",
            Ensemble::MaximallyCoherent => "maximally-coherent",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ensemble {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ginibre" => Ok(Ensemble::Ginibre),
            "haar-pure" | "haar" | "pure" => Ok(Ensemble::HaarPure),
            "maximally-coherent" | "max-coherent" => Ok(Ensemble::MaximallyCoherent),
            other => Err(HarnessError::Config(format!(
                "unknown ensemble '{other}' (expected ginibre, haar-pure or maximally-coherent)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(HarnessError::Config(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub seed: u64,
    pub measures: BTreeSet<MeasureKind>,
    pub ensemble: Ensemble,
    pub roc_tol: f64,
    pub output_path: PathBuf,
    pub format: ReportFormat,
}

impl Default for ExperimentConfig {
    /// dims {2, 3, 4, 8}, 1000 Ginibre trials each, seed 42, every measure
    /// except robustness.
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 8],
            trials_per_dim: 1000,
            seed: 42,
            measures: [MeasureKind::L1, MeasureKind::RelativeEntropy, MeasureKind::WignerYanase]
                .into_iter()
                .collect(),
            ensemble: Ensemble::Ginibre,
            roc_tol: ROC_DEFAULT_TOL,
            output_path: PathBuf::from("report.json"),
            format: ReportFormat::Json,
        }
    }
}

impl ExperimentConfig {
    /// Robustness probe defaults: dims {2, 3, 4}, 100 trials each.
    pub fn robustness_default() -> Self {
        Self {
            dims: vec![2, 3, 4],
            trials_per_dim: 100,
            measures: [MeasureKind::Robustness].into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.dims.is_empty() {
            return Err(HarnessError::Config("dims must not be empty".into()));
        }
        let cap = max_joint_dim();
        let mut seen = BTreeSet::new();
        for &d in &self.dims {
            if d == 0 || d > MAX_STATE_DIM {
                return Err(HarnessError::Config(format!("dimension {d} outside [1, {MAX_STATE_DIM}]")));
            }
            if d * d > cap {
                return Err(HarnessError::Config(format!(
                    "dimension {d} needs a joint space of {} > cap {cap}; raise DECOHERENCE_LAB_MAX_DIM",
                    d * d
                )));
            }
            if !seen.insert(d) {
                return Err(HarnessError::Config(format!("dimension {d} listed twice")));
            }
        }
        if self.trials_per_dim == 0 {
            return Err(HarnessError::Config("trials_per_dim must be at least 1".into()));
        }
        if self.measures.is_empty() {
            return Err(HarnessError::Config("at least one measure is required".into()));
        }
        let (lo, hi) = ROC_TOL_RANGE;
        if !(lo..=hi).contains(&self.roc_tol) {
            return Err(HarnessError::Config(format!(
                "roc_tol {:e} outside [{lo:e}, {hi:e}]",
                self.roc_tol
            )));
        }
        Ok(())
    }
}
