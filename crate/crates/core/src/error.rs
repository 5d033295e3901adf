use thiserror::Error;

/// Failures raised by the numerical core (kernel, states, measurement, measures).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jacobi diagonalization did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not Hermitian: max |A - A^H| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("matrix does not have unit trace: |Tr - 1| = {residual:e}")]
    NotUnitTrace { residual: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPSD { min_eigenvalue: f64 },

    #[error("joint dimension {dim} exceeds the configured maximum {max}")]
    OverflowGuard { dim: usize, max: usize },

    #[error("robustness solver failed after {iterations} Newton steps: last value {value}, residual {residual:e}")]
    SolverFailure {
        iterations: usize,
        value: f64,
        residual: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
