//! Validated density matrices, purification onto `system (x) environment`,
//! and seeded random state ensembles.
//!
//! Random sampling uses ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`, with Gaussian deviates from
//! `rand_distr::StandardNormal`. Both algorithms are versioned by the
//! lockfile, so a `(d, seed)` pair always yields the same state.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{eigh, kron, matrix_sqrt, ComplexMatrix};
use crate::tolerances::{HERMITIAN_TOL, PSD_CLIP_TOL, TRACE_TOL};

/// Largest system dimension the constructors accept.
pub const MAX_STATE_DIM: usize = 64;

/// A quantum state in the fixed coherence basis: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    basis_labels: Option<Vec<String>>,
}

impl DensityMatrix {
    /// Validates `m` and stores its Hermitian part.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = m.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let matrix = m.hermitian_part();
        let trace_residual = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        if trace_residual > TRACE_TOL {
            return Err(Error::NotUnitTrace {
                residual: trace_residual,
            });
        }
        let min_eigenvalue = eigh(&matrix)?.min_eigenvalue();
        if min_eigenvalue < -PSD_CLIP_TOL {
            return Err(Error::NotPSD { min_eigenvalue });
        }
        Ok(Self {
            matrix,
            basis_labels: None,
        })
    }

    /// Attaches names for the coherence basis vectors.
    pub fn with_basis_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: labels.len(),
            });
        }
        self.basis_labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn basis_labels(&self) -> Option<&[String]> {
        self.basis_labels.as_deref()
    }

    /// `p_i = <i|rho|i>`.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }

    /// `<i|rho|j>`.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// True when every off-diagonal entry has modulus at most `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.matrix[idx]
    }
}

pub fn new_density_matrix(m: ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(m)
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis_labels: Option<Vec<String>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityMatrixJson {
            dim: self.dim(),
            re: self.matrix.real_rows(),
            im: self.matrix.imag_rows(),
            basis_labels: self.basis_labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DensityMatrixJson::deserialize(d)?;
        if raw.re.len() != raw.dim {
            return Err(D::Error::custom(format!(
                "\"dim\" is {} but \"re\" has {} rows",
                raw.dim,
                raw.re.len()
            )));
        }
        let m = ComplexMatrix::from_parts(&raw.re, &raw.im).map_err(D::Error::custom)?;
        let state = DensityMatrix::new(m).map_err(D::Error::custom)?;
        match raw.basis_labels {
            Some(labels) => state.with_basis_labels(labels).map_err(D::Error::custom),
            None => Ok(state),
        }
    }
}

/// Unit vector on the `d (x) d` joint space, indexed `i * d + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureJointState {
    vector: Vec<Complex64>,
    d: usize,
}

impl PureJointState {
    pub fn new(vector: Vec<Complex64>, d: usize) -> Result<Self> {
        if d == 0 || vector.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: vector.len(),
            });
        }
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace {
                residual: (norm - 1.0).abs(),
            });
        }
        Ok(Self { vector, d })
    }

    pub fn system_dim(&self) -> usize {
        self.d
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    /// Amplitude of `|i>_sys (x) |j>_env`.
    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        self.vector[i * self.d + j]
    }

    pub fn norm(&self) -> f64 {
        self.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|Psi><Psi|` on the joint space.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vector)
    }
}

/// Unnormalized `sum_i |ii>` on the `d (x) d` space.
pub fn maximally_entangled_vector(d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = Complex64::new(1.0, 0.0);
    }
    v
}

/// `|Psi> = (sqrt(rho) (x) I) sum_i |ii>`, so `<i j|Psi> = <i|sqrt(rho)|j>`.
///
/// With the unnormalized `sum_i |ii>` the result has norm `Tr rho = 1`.
pub fn purify(rho: &DensityMatrix) -> Result<PureJointState> {
    let d = rho.dim();
    let root = matrix_sqrt(rho.matrix())?;
    let lifted = kron(&root, &ComplexMatrix::identity(d))?;
    let vector = lifted.matvec(&maximally_entangled_vector(d));
    PureJointState::new(vector, d)
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_STATE_DIM {
        return Err(Error::InvalidArgument(format!(
            "state dimension must be in [1, {MAX_STATE_DIM}], got {d}"
        )));
    }
    Ok(())
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Hilbert-Schmidt random state `G G^H / Tr(G G^H)` with `G` a complex
/// Ginibre matrix drawn row-major from the seeded generator.
pub fn random_density_matrix(d: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(d, |_, _| complex_normal(&mut rng));
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(w.scale_real(1.0 / tr))
}

/// Haar-random pure state `|v><v|`.
pub fn random_pure_state(d: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..d).map(|_| complex_normal(&mut rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    DensityMatrix::new(ComplexMatrix::outer(&v))
}

/// `rho_ij = 1/d` for all `i, j`.
pub fn maximally_coherent(d: usize) -> Result<DensityMatrix> {
    check_dim(d)?;
    let w = Complex64::new(1.0 / d as f64, 0.0);
    DensityMatrix::new(ComplexMatrix::from_fn(d, |_, _| w))
}

/// `I / d`.
pub fn maximally_mixed(d: usize) -> Result<DensityMatrix> {
    check_dim(d)?;
    DensityMatrix::new(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
}

/// `|k><k|` in the coherence basis.
pub fn basis_state(d: usize, k: usize) -> Result<DensityMatrix> {
    check_dim(d)?;
    if k >= d {
        return Err(Error::InvalidArgument(format!("basis index {k} out of range for d = {d}")));
    }
    let mut p = vec![0.0; d];
    p[k] = 1.0;
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&p))
}
