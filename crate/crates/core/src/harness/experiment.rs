use std::time::Instant;

use rayon::prelude::*;

use super::config::{Ensemble, ExperimentConfig};
use super::report::{
    asserted_threshold, GapSummary, ProbabilityRecord, ProbabilityReport, ProbabilitySummary, ReportMetadata,
    RocObservation, TransferRecord, TransferReport, ROC_SECTION_LABEL,
};
use super::HarnessError;
use crate::coherence::{coherence_with_tol, robustness_of_coherence, MeasureKind};
use crate::error::Result;
use crate::measurement::measure_system;
use crate::states::{maximally_coherent, purify, random_density_matrix, random_pure_state, DensityMatrix};
use crate::tolerances::PROBABILITY_GAP;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in dimension `dim`:
/// `seed ^ splitmix64(splitmix64(dim) ^ trial)`.
///
/// Depends only on its arguments, so trials can run in any order.
pub fn trial_seed(seed: u64, dim: usize, trial: usize) -> u64 {
    seed ^ splitmix64(splitmix64(dim as u64) ^ trial as u64)
}

pub fn sample_state(ensemble: Ensemble, dim: usize, seed: u64) -> Result<DensityMatrix> {
    match ensemble {
        Ensemble::Ginibre => random_density_matrix(dim, seed),
        Ensemble::HaarPure => random_pure_state(dim, seed),
        Ensemble::MaximallyCoherent => maximally_coherent(dim),
    }
}

/// Everything one trial of the transfer experiment produces.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub dim: usize,
    pub trial_index: usize,
    pub records: Vec<TransferRecord>,
    pub roc: Option<RocObservation>,
    pub conjugation_gap: f64,
}

/// Samples `rho`, computes the environment state through purification and
/// measurement, and evaluates every requested measure on both.
pub fn run_trial(cfg: &ExperimentConfig, dim: usize, trial_index: usize) -> Result<TrialOutcome> {
    let rho = sample_state(cfg.ensemble, dim, trial_seed(cfg.seed, dim, trial_index))?;
    let tau = measure_system(&purify(&rho)?)?.environment_state;
    let conjugation_gap = tau.matrix().max_abs_diff(&rho.matrix().conjugate_entrywise());

    let mut records = Vec::new();
    let mut roc = None;
    for &kind in &cfg.measures {
        if kind == MeasureKind::Robustness {
            roc = Some(observe_robustness(&rho, &tau, dim, trial_index, cfg.roc_tol));
            continue;
        }
        let system = coherence_with_tol(&rho, kind, cfg.roc_tol)?;
        let environment = coherence_with_tol(&tau, kind, cfg.roc_tol)?;
        records.push(TransferRecord::new(dim, trial_index, kind, system, environment));
    }
    Ok(TrialOutcome {
        dim,
        trial_index,
        records,
        roc,
        conjugation_gap,
    })
}

fn observe_robustness(
    rho: &DensityMatrix,
    tau: &DensityMatrix,
    dim: usize,
    trial_index: usize,
    tol: f64,
) -> RocObservation {
    let system = robustness_of_coherence(rho, tol);
    let environment = robustness_of_coherence(tau, tol);
    let error = [&system, &environment]
        .iter()
        .filter_map(|r| r.as_ref().err().map(|e| e.to_string()))
        .collect::<Vec<_>>();
    let value_system = system.ok().map(|s| s.value);
    let value_environment = environment.ok().map(|s| s.value);
    RocObservation {
        dim,
        trial_index,
        value_system,
        value_environment,
        abs_gap: value_system.zip(value_environment).map(|(a, b)| (a - b).abs()),
        error: if error.is_empty() { None } else { Some(error.join("; ")) },
    }
}

fn metadata(cfg: &ExperimentConfig, max_conjugation_gap: f64, wall_time: f64) -> ReportMetadata {
    let mut dims = cfg.dims.clone();
    dims.sort_unstable();
    ReportMetadata {
        seed: cfg.seed,
        ensemble: cfg.ensemble,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        dims,
        trials_per_dim: cfg.trials_per_dim,
        measures: cfg.measures.iter().copied().collect(),
        roc_tol: cfg.roc_tol,
        max_conjugation_gap,
        roc_label: ROC_SECTION_LABEL.to_string(),
        wall_time,
    }
}

fn trial_grid(cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    let mut dims = cfg.dims.clone();
    dims.sort_unstable();
    dims.iter()
        .flat_map(|&d| (0..cfg.trials_per_dim).map(move |t| (d, t)))
        .collect()
}

/// Runs the coherence-transfer experiment over every `(dim, trial)` pair.
///
/// Trials run in parallel; records are ordered by `(dim, trial_index,
/// measure)` before assembly so the output does not depend on scheduling.
pub fn run_transfer_experiment(cfg: &ExperimentConfig) -> Result<TransferReport, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut outcomes = trial_grid(cfg)
        .into_par_iter()
        .map(|(d, t)| run_trial(cfg, d, t))
        .collect::<Result<Vec<_>>>()?;
    outcomes.sort_by_key(|o| (o.dim, o.trial_index));

    let max_conjugation_gap = outcomes.iter().map(|o| o.conjugation_gap).fold(0.0, f64::max);
    let mut records: Vec<TransferRecord> = outcomes.iter().flat_map(|o| o.records.iter().cloned()).collect();
    records.sort_by_key(|r| (r.dim, r.trial_index, r.measure));
    let roc_observed: Vec<RocObservation> = outcomes.into_iter().filter_map(|o| o.roc).collect();

    let summary = summarize(cfg, &records);
    Ok(TransferReport {
        metadata: metadata(cfg, max_conjugation_gap, start.elapsed().as_secs_f64()),
        records,
        summary,
        roc_observed,
    })
}

fn summarize(cfg: &ExperimentConfig, records: &[TransferRecord]) -> Vec<GapSummary> {
    let mut dims = cfg.dims.clone();
    dims.sort_unstable();
    let mut out = Vec::new();
    for d in dims {
        for &kind in &cfg.measures {
            let Some(threshold) = asserted_threshold(kind) else {
                continue;
            };
            let gaps: Vec<f64> = records
                .iter()
                .filter(|r| r.dim == d && r.measure == kind)
                .map(|r| r.abs_gap)
                .collect();
            let max_gap = gaps.iter().copied().fold(0.0, f64::max);
            let mean_gap = gaps.iter().sum::<f64>() / gaps.len() as f64;
            out.push(GapSummary {
                dim: d,
                measure: kind,
                trials: gaps.len(),
                max_gap,
                mean_gap,
                threshold,
                passed: max_gap <= threshold,
            });
        }
    }
    out
}

/// `max_i |q_i - <i|rho|i>|` for one sampled state.
pub fn probability_gap(rho: &DensityMatrix) -> Result<f64> {
    let outcome = measure_system(&purify(rho)?)?;
    Ok(outcome
        .probabilities
        .iter()
        .zip(rho.populations())
        .map(|(q, p)| (q - p).abs())
        .fold(0.0, f64::max))
}

/// Compares outcome probabilities with the populations of `rho` per trial.
pub fn run_probability_check(cfg: &ExperimentConfig) -> Result<ProbabilityReport, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut records = trial_grid(cfg)
        .into_par_iter()
        .map(|(d, t)| {
            let rho = sample_state(cfg.ensemble, d, trial_seed(cfg.seed, d, t))?;
            Ok(ProbabilityRecord {
                dim: d,
                trial_index: t,
                max_gap: probability_gap(&rho)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.dim, r.trial_index));

    let mut dims = cfg.dims.clone();
    dims.sort_unstable();
    let summary = dims
        .into_iter()
        .map(|d| {
            let rows: Vec<&ProbabilityRecord> = records.iter().filter(|r| r.dim == d).collect();
            let max_gap = rows.iter().map(|r| r.max_gap).fold(0.0, f64::max);
            ProbabilitySummary {
                dim: d,
                trials: rows.len(),
                max_gap,
                threshold: PROBABILITY_GAP,
                passed: max_gap <= PROBABILITY_GAP,
            }
        })
        .collect();
    Ok(ProbabilityReport {
        metadata: metadata(cfg, 0.0, start.elapsed().as_secs_f64()),
        records,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::basis_state;
    use std::collections::BTreeSet;

    fn cfg(dims: Vec<usize>, trials: usize, seed: u64, measures: &[MeasureKind]) -> ExperimentConfig {
        ExperimentConfig {
            dims,
            trials_per_dim: trials,
            seed,
            measures: measures.iter().copied().collect::<BTreeSet<_>>(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs of the reference SplitMix64 stream seeded with 0.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0x9E37_79B9_7F4A_7C15), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn trial_seeds_differ_across_dims_and_trials() {
        let seeds: BTreeSet<u64> = (1..=8)
            .flat_map(|d| (0..100).map(move |t| trial_seed(42, d, t)))
            .collect();
        assert_eq!(seeds.len(), 800);
    }

    #[test]
    fn single_l1_trial() {
        let report = run_transfer_experiment(&cfg(vec![2], 1, 7, &[MeasureKind::L1])).unwrap();
        assert_eq!(report.records.len(), 1);
        assert!(report.records[0].abs_gap <= 1e-10);
        assert!(report.records[0].value_system > 0.0);
    }

    #[test]
    fn one_dimensional_states_have_no_coherence() {
        let report = run_transfer_experiment(&cfg(vec![1], 5, 3, &MeasureKind::ALL)).unwrap();
        assert_eq!(report.records.len(), 15);
        for r in &report.records {
            assert_eq!((r.value_system, r.value_environment, r.abs_gap), (0.0, 0.0, 0.0));
        }
        for o in &report.roc_observed {
            assert_eq!(o.abs_gap, Some(0.0));
        }
    }

    #[test]
    fn records_are_sorted_and_summaries_cover_asserted_measures() {
        let report = run_transfer_experiment(&cfg(vec![3, 2], 4, 1, &MeasureKind::ALL)).unwrap();
        let keys: Vec<_> = report.records.iter().map(|r| (r.dim, r.trial_index, r.measure)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(report.summary.len(), 6);
        assert_eq!(report.roc_observed.len(), 8);
        assert!(report.passed());
        report.validate().unwrap();
    }

    #[test]
    fn haar_pure_relative_entropy_is_dephased_entropy() {
        let c = ExperimentConfig {
            ensemble: Ensemble::HaarPure,
            ..cfg(vec![3], 10, 5, &[MeasureKind::RelativeEntropy])
        };
        let report = run_transfer_experiment(&c).unwrap();
        for r in &report.records {
            let rho = sample_state(Ensemble::HaarPure, 3, trial_seed(5, 3, r.trial_index)).unwrap();
            let dephased = crate::coherence::entropy_of_spectrum(&rho.populations());
            assert!((r.value_system - dephased).abs() <= 1e-10);
        }
    }

    #[test]
    fn probability_gap_cases() {
        assert_eq!(probability_gap(&basis_state(3, 0).unwrap()).unwrap(), 0.0);
        assert!(probability_gap(&maximally_coherent(4).unwrap()).unwrap() <= 1e-12);
        let report = run_probability_check(&cfg(vec![2, 3], 10, 9, &[MeasureKind::L1])).unwrap();
        assert_eq!(report.records.len(), 20);
        assert!(report.passed());
    }
}
