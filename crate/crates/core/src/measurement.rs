//! Total dephasing in the coherence basis and the non-selective projective
//! measurement of the system half of a purification.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::{partial_trace, ComplexMatrix, Subsystem};
use crate::states::{purify, DensityMatrix, PureJointState};
use crate::tolerances::{PROBABILITY_CLIP, PROBABILITY_SUM_TOL};

/// Result of measuring the system in the coherence basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    /// `q_i = <Psi|(|i><i| (x) I)|Psi>`, clipped at zero.
    pub probabilities: Vec<f64>,
    /// Branch-summed joint state `sum_i (P_i (x) I)|Psi><Psi|(P_i (x) I)`.
    pub post_joint: ComplexMatrix,
    /// Reduced state of the environment after the measurement.
    pub environment_state: DensityMatrix,
}

/// Keeps only the diagonal of `rho`.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let diag = rho.populations();
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&diag))
        .expect("the diagonal of a valid state is a valid state")
}

/// Measures the system of `psi` in the coherence basis without selecting
/// an outcome.
pub fn measure_system(psi: &PureJointState) -> Result<MeasurementOutcome> {
    let d = psi.system_dim();
    if psi.vector().len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: psi.vector().len(),
        });
    }

    let mut probabilities: Vec<f64> = (0..d)
        .map(|i| (0..d).map(|j| psi.amplitude(i, j).norm_sqr()).sum())
        .collect();
    for q in &mut probabilities {
        if q.abs() < PROBABILITY_CLIP {
            *q = 0.0;
        }
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(Error::NotUnitTrace {
            residual: (total - 1.0).abs(),
        });
    }

    // (P_i (x) I)|Psi><Psi|(P_k (x) I) vanishes unless i == k.
    let v = psi.vector();
    let post_joint = ComplexMatrix::from_fn(d * d, |r, c| {
        if r / d == c / d {
            v[r] * v[c].conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let tau = partial_trace(&post_joint, Subsystem::System, d)?;
    let environment_state = DensityMatrix::new(tau)?;

    Ok(MeasurementOutcome {
        probabilities,
        post_joint,
        environment_state,
    })
}

/// Environment state after purifying `rho` and measuring the system.
pub fn environment_state(rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(measure_system(&purify(rho)?)?.environment_state)
}

/// Outcome probabilities of the coherence-basis measurement on the
/// purification of `rho`.
pub fn outcome_probabilities(rho: &DensityMatrix) -> Result<Vec<f64>> {
    Ok(measure_system(&purify(rho)?)?.probabilities)
}
