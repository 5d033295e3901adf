//! Dense complex linear algebra used by every other module: Hermitian
//! eigendecomposition, PSD functional calculus, Kronecker products and
//! partial traces over a `system (x) environment` split.
//!
//! Joint-space indices are system-major: `|i>_sys (x) |j>_env` lives at flat
//! index `i * d + j`.

mod eigh;
mod matrix;

pub use eigh::{eigh, EigenDecomposition};
pub use matrix::ComplexMatrix;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{DEFAULT_MAX_JOINT_DIM, MAX_DIM_ENV, PSD_CLIP_TOL, SPECTRAL_FLOOR};

/// Which factor of a `d (x) d` joint space to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Environment,
}

/// Joint-dimension cap, read from `DECOHERENCE_LAB_MAX_DIM` when set to a
/// positive integer.
pub fn max_joint_dim() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(DEFAULT_MAX_JOINT_DIM)
}

/// `f(A)` for Hermitian `A`, evaluated through its eigendecomposition.
pub fn hermitian_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(eigh(a)?.map_spectrum(f))
}

/// Square roots of a PSD spectrum. Eigenvalues under the solver's accuracy
/// floor (including round-off negatives down to `-1e-10`) map to zero.
pub fn sqrt_spectrum(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    let max = eigenvalues.iter().copied().fold(0.0, f64::max);
    let floor = SPECTRAL_FLOOR * max.max(1.0);
    eigenvalues
        .iter()
        .map(|&l| {
            if l < -PSD_CLIP_TOL {
                Err(Error::NotPSD { min_eigenvalue: l })
            } else if l <= floor {
                Ok(0.0)
            } else {
                Ok(l.sqrt())
            }
        })
        .collect()
}

/// Principal square root of a Hermitian PSD matrix.
pub fn matrix_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = eigh(a)?;
    Ok(e.with_spectrum(&sqrt_spectrum(&e.eigenvalues)?))
}

/// Kronecker product, bounded by [`max_joint_dim`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_cap(a, b, max_joint_dim())
}

/// `(A (x) B)[(i*dB + k), (j*dB + l)] = A[i][j] * B[k][l]`.
pub fn kron_with_cap(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da.saturating_mul(db);
    if dim > cap {
        return Err(Error::OverflowGuard { dim, max: cap });
    }
    Ok(ComplexMatrix::from_fn(dim, |r, c| {
        a[(r / db, c / db)] * b[(r % db, c % db)]
    }))
}

/// Traces `subsystem` out of an operator on a `d (x) d` space.
pub fn partial_trace(m: &ComplexMatrix, subsystem: Subsystem, d: usize) -> Result<ComplexMatrix> {
    if d == 0 || d.checked_mul(d) != Some(m.dim()) {
        return Err(Error::DimensionMismatch {
            expected: d.saturating_mul(d),
            found: m.dim(),
        });
    }
    let out = match subsystem {
        Subsystem::Environment => ComplexMatrix::from_fn(d, |i, j| {
            (0..d).map(|k| m[(i * d + k, j * d + k)]).sum()
        }),
        Subsystem::System => ComplexMatrix::from_fn(d, |i, j| {
            (0..d).map(|k| m[(k * d + i, k * d + j)]).sum()
        }),
    };
    Ok(out)
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.max_abs()
}

pub fn conjugate_entrywise(a: &ComplexMatrix) -> ComplexMatrix {
    a.conjugate_entrywise()
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.trace()
}

/// Lower-triangular `L` with `A = L L^H`, or `None` when `A` is not
/// numerically positive definite.
pub fn cholesky(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.dim();
    let mut l = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut diag = a[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        if diag <= 0.0 || !diag.is_finite() {
            return None;
        }
        let ljj = diag.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut acc = a[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / ljj;
        }
    }
    Some(l)
}

/// Solves `L L^H x = b` given the Cholesky factor `L`.
pub fn cholesky_solve(l: &ComplexMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.dim();
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = b[i];
        for k in 0..i {
            acc -= l[(i, k)] * y[k];
        }
        y[i] = acc / l[(i, i)];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        for k in (i + 1)..n {
            acc -= l[(k, i)].conj() * x[k];
        }
        x[i] = acc / l[(i, i)];
    }
    x
}

/// Inverse of a Hermitian positive definite matrix via Cholesky.
pub fn hpd_inverse(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let l = cholesky(a)?;
    let n = a.dim();
    let mut inv = ComplexMatrix::zeros(n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        e[j] = Complex64::new(1.0, 0.0);
        for (i, z) in cholesky_solve(&l, &e).into_iter().enumerate() {
            inv[(i, j)] = z;
        }
    }
    Some(inv.hermitian_part())
}
