//! Measurement-induced coherence transfer.
//!
//! A state `rho` is purified into `|Psi> = (sqrt(rho) (x) I) sum_i |ii>`, the
//! system half is measured in the coherence basis, and the environment is
//! left in `tau`, the entrywise complex conjugate of `rho`. The crate provides
//! the linear algebra, states, measurement pipeline and coherence measures
//! needed to check numerically that `rho` and `tau` carry the same coherence,
//! plus an experiment harness and CLI that run those checks at scale.

pub mod coherence;
pub mod error;
pub mod harness;
pub mod measurement;
pub mod numkernel;
pub mod states;
pub mod tolerances;

pub use coherence::{coherence, MeasureKind, RocSolution};
pub use error::{Error, Result};
pub use measurement::{dephase, environment_state, measure_system, MeasurementOutcome};
pub use numkernel::{ComplexMatrix, EigenDecomposition};
pub use states::{purify, DensityMatrix, PureJointState};
