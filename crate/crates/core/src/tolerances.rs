//! Numerical thresholds shared across the crate.
//!
//! Every bound that decides validity or pass/fail lives here so tests, the
//! harness and the library agree on one number.

/// Max entrywise anti-Hermitian residual accepted for a state or observable.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Accepted deviation of the trace of a state from one.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues above `-PSD_CLIP_TOL` are clipped to zero in PSD functional
/// calculus; anything lower is a genuine negative eigenvalue.
pub const PSD_CLIP_TOL: f64 = 1e-10;

/// Eigenvalues below this fraction of `max(1, lambda_max)` sit under the
/// eigensolver's accuracy floor and are taken as exactly zero when a square
/// root is formed.
pub const SPECTRAL_FLOOR: f64 = 1e-13;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the matrix Frobenius norm.
pub const JACOBI_REL_TOL: f64 = 1e-13;

/// Sweep budget for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Outcome probabilities with magnitude below this are treated as zero.
pub const PROBABILITY_CLIP: f64 = 1e-12;

/// Sum of outcome probabilities must be within this of one.
pub const PROBABILITY_SUM_TOL: f64 = 1e-10;

/// Entries with modulus at or below this count as zero when deciding
/// whether a state is diagonal.
pub const DIAGONAL_ENTRY_TOL: f64 = 1e-14;

/// Default cap on the system-environment joint dimension.
pub const DEFAULT_MAX_JOINT_DIM: usize = 64;

/// Environment variable overriding [`DEFAULT_MAX_JOINT_DIM`].
pub const MAX_DIM_ENV: &str = "DECOHERENCE_LAB_MAX_DIM";

/// Default tolerance for the robustness-of-coherence barrier solver.
pub const ROC_DEFAULT_TOL: f64 = 1e-6;

/// Admissible range of robustness solver tolerances.
pub const ROC_TOL_RANGE: (f64, f64) = (1e-9, 1e-4);

/// Asserted transfer gap for the l1 measure.
pub const L1_GAP: f64 = 1e-10;

/// Asserted transfer gap for relative-entropy coherence (eigensolver limited).
pub const RELATIVE_ENTROPY_GAP: f64 = 1e-8;

/// Asserted transfer gap for Wigner-Yanase coherence.
pub const WY_GAP: f64 = 1e-8;

/// Asserted gap between outcome probabilities and populations.
pub const PROBABILITY_GAP: f64 = 1e-12;

/// Asserted gap between the pipeline environment state and conj(rho).
pub const CONJUGATION_GAP: f64 = 1e-10;
