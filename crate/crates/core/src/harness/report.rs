//! Report types and their JSON / CSV encodings.
//!
//! JSON numbers are written with 17 significant digits so every `f64`
//! survives a round trip bit for bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::config::{Ensemble, ReportFormat};
use super::HarnessError;
use crate::coherence::MeasureKind;
use crate::tolerances::{L1_GAP, RELATIVE_ENTROPY_GAP, WY_GAP};

/// Label carried by every report for the robustness section.
pub const ROC_SECTION_LABEL: &str = "observed, not asserted";

pub(crate) fn sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::Error as _;
    if !x.is_finite() {
        return Err(S::Error::custom(format!("non-finite value {x} cannot be written as JSON")));
    }
    let raw = RawValue::from_string(format!("{x:.16e}")).map_err(S::Error::custom)?;
    raw.serialize(s)
}

pub(crate) fn sig17_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => sig17(v, s),
        None => s.serialize_none(),
    }
}

/// Threshold a transfer gap must stay under, or `None` for measures whose
/// gap is only observed.
pub fn asserted_threshold(kind: MeasureKind) -> Option<f64> {
    match kind {
        MeasureKind::L1 => Some(L1_GAP),
        MeasureKind::RelativeEntropy => Some(RELATIVE_ENTROPY_GAP),
        MeasureKind::WignerYanase => Some(WY_GAP),
        MeasureKind::Robustness => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub seed: u64,
    pub ensemble: Ensemble,
    pub tool_version: String,
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub measures: Vec<MeasureKind>,
    #[serde(serialize_with = "sig17")]
    pub roc_tol: f64,
    /// Largest `max |tau - conj(rho)|` seen over all trials.
    #[serde(serialize_with = "sig17")]
    pub max_conjugation_gap: f64,
    pub roc_label: String,
    #[serde(serialize_with = "sig17")]
    pub wall_time: f64,
}

/// One measure evaluated on `rho` and on its environment state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferRecord {
    pub dim: usize,
    pub trial_index: usize,
    pub measure: MeasureKind,
    #[serde(serialize_with = "sig17")]
    pub value_system: f64,
    #[serde(serialize_with = "sig17")]
    pub value_environment: f64,
    #[serde(serialize_with = "sig17")]
    pub abs_gap: f64,
}

impl TransferRecord {
    pub fn new(dim: usize, trial_index: usize, measure: MeasureKind, system: f64, environment: f64) -> Self {
        Self {
            dim,
            trial_index,
            measure,
            value_system: system,
            value_environment: environment,
            abs_gap: (system - environment).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub dim: usize,
    pub measure: MeasureKind,
    pub trials: usize,
    #[serde(serialize_with = "sig17")]
    pub max_gap: f64,
    #[serde(serialize_with = "sig17")]
    pub mean_gap: f64,
    #[serde(serialize_with = "sig17")]
    pub threshold: f64,
    pub passed: bool,
}

/// Robustness on `rho` and `tau`; a failed solve keeps its diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocObservation {
    pub dim: usize,
    pub trial_index: usize,
    #[serde(serialize_with = "sig17_opt")]
    pub value_system: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub value_environment: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub abs_gap: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub metadata: ReportMetadata,
    pub records: Vec<TransferRecord>,
    pub summary: Vec<GapSummary>,
    pub roc_observed: Vec<RocObservation>,
}

impl TransferReport {
    /// Every asserted summary row and the conjugation cross-check pass.
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|s| s.passed)
            && self.metadata.max_conjugation_gap <= crate::tolerances::CONJUGATION_GAP
    }

    /// Re-checks internal consistency after loading.
    pub fn validate(&self) -> Result<(), String> {
        for (n, r) in self.records.iter().enumerate() {
            if r.abs_gap != (r.value_system - r.value_environment).abs() {
                return Err(format!("records[{n}].abs_gap does not equal |value_system - value_environment|"));
            }
        }
        for (n, s) in self.summary.iter().enumerate() {
            let max = self
                .records
                .iter()
                .filter(|r| r.dim == s.dim && r.measure == s.measure)
                .map(|r| r.abs_gap)
                .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.max(g))));
            if max != Some(s.max_gap) {
                return Err(format!("summary[{n}].max_gap does not match its records"));
            }
        }
        Ok(())
    }

    /// Plain-text max-gap table.
    pub fn summary_table(&self) -> String {
        let mut out = format!(
            "{:>4}  {:<12} {:>7}  {:>12}  {:>12}  {:>9}  {}\n",
            "dim", "measure", "trials", "max_gap", "mean_gap", "threshold", "status"
        );
        for s in &self.summary {
            out.push_str(&format!(
                "{:>4}  {:<12} {:>7}  {:>12.3e}  {:>12.3e}  {:>9.0e}  {}\n",
                s.dim,
                s.measure.as_str(),
                s.trials,
                s.max_gap,
                s.mean_gap,
                s.threshold,
                if s.passed { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "max |tau - conj(rho)| = {:.3e}\n",
            self.metadata.max_conjugation_gap
        ));
        if !self.roc_observed.is_empty() {
            out.push_str(&format!("robustness ({ROC_SECTION_LABEL}):\n"));
            let mut dims: Vec<usize> = self.roc_observed.iter().map(|o| o.dim).collect();
            dims.dedup();
            for d in dims {
                let rows: Vec<&RocObservation> = self.roc_observed.iter().filter(|o| o.dim == d).collect();
                let gaps: Vec<f64> = rows.iter().filter_map(|o| o.abs_gap).collect();
                let failures = rows.len() - gaps.len();
                let max = gaps.iter().copied().fold(0.0, f64::max);
                out.push_str(&format!(
                    "{:>4}  roc          {:>7}  max_gap {:.3e}  solver failures {}\n",
                    d,
                    rows.len(),
                    max,
                    failures
                ));
            }
        }
        out
    }
}

/// Per-trial probability identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityRecord {
    pub dim: usize,
    pub trial_index: usize,
    /// `max_i |q_i - <i|rho|i>|`.
    #[serde(serialize_with = "sig17")]
    pub max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilitySummary {
    pub dim: usize,
    pub trials: usize,
    #[serde(serialize_with = "sig17")]
    pub max_gap: f64,
    #[serde(serialize_with = "sig17")]
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub metadata: ReportMetadata,
    pub records: Vec<ProbabilityRecord>,
    pub summary: Vec<ProbabilitySummary>,
}

impl ProbabilityReport {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|s| s.passed)
    }

    pub fn summary_table(&self) -> String {
        let mut out = format!("{:>4}  {:>7}  {:>12}  {:>9}  {}\n", "dim", "trials", "max_gap", "threshold", "status");
        for s in &self.summary {
            out.push_str(&format!(
                "{:>4}  {:>7}  {:>12.3e}  {:>9.0e}  {}\n",
                s.dim,
                s.trials,
                s.max_gap,
                s.threshold,
                if s.passed { "pass" } else { "FAIL" }
            ));
        }
        out
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    section: &'a str,
    dim: usize,
    trial_index: usize,
    measure: &'a str,
    value_system: String,
    value_environment: String,
    abs_gap: String,
    error: &'a str,
}

fn fmt17(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// CSV encoding: a header row, then one row per asserted record followed by
/// one row per robustness observation.
pub fn report_to_csv(report: &TransferReport) -> Result<Vec<u8>, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| HarnessError::Serialize(e.to_string());
    if report.records.is_empty() && report.roc_observed.is_empty() {
        w.write_record([
            "section",
            "dim",
            "trial_index",
            "measure",
            "value_system",
            "value_environment",
            "abs_gap",
            "error",
        ])
        .map_err(ser)?;
    }
    for r in &report.records {
        w.serialize(CsvRow {
            section: "asserted",
            dim: r.dim,
            trial_index: r.trial_index,
            measure: r.measure.as_str(),
            value_system: fmt17(Some(r.value_system)),
            value_environment: fmt17(Some(r.value_environment)),
            abs_gap: fmt17(Some(r.abs_gap)),
            error: "",
        })
        .map_err(ser)?;
    }
    for o in &report.roc_observed {
        w.serialize(CsvRow {
            section: "observed",
            dim: o.dim,
            trial_index: o.trial_index,
            measure: MeasureKind::Robustness.as_str(),
            value_system: fmt17(o.value_system),
            value_environment: fmt17(o.value_environment),
            abs_gap: fmt17(o.abs_gap),
            error: o.error.as_deref().unwrap_or(""),
        })
        .map_err(ser)?;
    }
    w.into_inner().map_err(|e| HarnessError::Serialize(e.to_string()))
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, HarnessError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Serialize(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        return std::io::stdout().write_all(bytes).map_err(io);
    }
    fs::write(path, bytes).map_err(io)
}

/// Writes `report` to `path` (`-` for standard output).
pub fn write_report(report: &TransferReport, path: &Path, format: ReportFormat) -> Result<(), HarnessError> {
    let bytes = match format {
        ReportFormat::Json => to_json_string(report)?.into_bytes(),
        ReportFormat::Csv => report_to_csv(report)?,
    };
    write_bytes(path, &bytes)
}

pub fn write_probability_report(
    report: &ProbabilityReport,
    path: &Path,
    format: ReportFormat,
) -> Result<(), HarnessError> {
    let bytes = match format {
        ReportFormat::Json => to_json_string(report)?.into_bytes(),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["dim", "trial_index", "max_gap"])
                .map_err(|e| HarnessError::Serialize(e.to_string()))?;
            for r in &report.records {
                w.write_record([r.dim.to_string(), r.trial_index.to_string(), fmt17(Some(r.max_gap))])
                    .map_err(|e| HarnessError::Serialize(e.to_string()))?;
            }
            w.into_inner().map_err(|e| HarnessError::Serialize(e.to_string()))?
        }
    };
    write_bytes(path, &bytes)
}

fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, HarnessError> {
    serde_json::from_str(text).map_err(|e| HarnessError::Schema {
        path: origin.to_string(),
        message: e.to_string(),
    })
}

/// Parses a JSON transfer report and re-checks its internal consistency.
pub fn parse_report(text: &str, origin: &str) -> Result<TransferReport, HarnessError> {
    let report: TransferReport = parse_json(text, origin)?;
    report.validate().map_err(|message| HarnessError::Schema {
        path: origin.to_string(),
        message,
    })?;
    Ok(report)
}

pub fn read_report(path: &Path) -> Result<TransferReport, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_report(&text, &path.display().to_string())
}
