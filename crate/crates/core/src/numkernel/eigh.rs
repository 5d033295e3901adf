//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classic real Jacobi rotation to the resulting
//! real symmetric 2x2 block. Rotations are accumulated into the eigenvector
//! matrix. Sweeps visit pivots in row-cyclic order, which keeps the result
//! bit-stable for a given input.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerances::{JACOBI_MAX_SWEEPS, JACOBI_REL_TOL};

/// Eigenvalues (descending) and the matching orthonormal eigenvectors,
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k`, paired with `eigenvalues[k]`.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("decomposition is never empty")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `sum_k f(lambda_k) |psi_k><psi_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.with_spectrum(&weights)
    }

    /// `sum_k w_k |psi_k><psi_k|` for explicit weights `w`.
    pub fn with_spectrum(&self, weights: &[f64]) -> ComplexMatrix {
        assert_eq!(weights.len(), self.dim(), "one weight per eigenvector");
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    /// `sum_k lambda_k |psi_k><psi_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Diagonalizes the Hermitian part `(A + A^H)/2` of `a`.
pub fn eigh(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    eigh_with_budget(a, JACOBI_MAX_SWEEPS)
}

pub(crate) fn eigh_with_budget(a: &ComplexMatrix, max_sweeps: usize) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    let target = JACOBI_REL_TOL * scale;

    let mut sweeps = 0;
    loop {
        let off = m.off_diagonal_norm();
        if off <= target {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NonConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    Ok(sorted_decomposition(&m, v))
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.dim();
    let g = m[(p, q)];
    let r = g.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Rotations this small no longer move the diagonal; zero the pivot.
    if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = Complex64::new(0.0, 0.0);
        m[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = g / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    // M <- M U
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * upp + mkq * uqp;
        m[(k, q)] = mkp * upq + mkq * uqq;
    }
    // M <- U^H M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = upp.conj() * mpk + uqp.conj() * mqk;
        m[(q, k)] = upq.conj() * mpk + uqq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(app - t * r, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * r, 0.0);

    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// Phase-normalizes every eigenvector (first non-negligible component real
/// and positive) and orders pairs by descending eigenvalue, breaking exact
/// ties by lexicographic order of the normalized eigenvector components.
fn sorted_decomposition(m: &ComplexMatrix, v: ComplexMatrix) -> EigenDecomposition {
    let n = m.dim();
    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| (m[(k, k)].re, normalize_phase(v.column(k))))
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        lb.total_cmp(la).then_with(|| {
            va.iter()
                .zip(vb)
                .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });
    let eigenvalues = pairs.iter().map(|(l, _)| *l).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| pairs[k].1[i]);
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

fn normalize_phase(mut col: Vec<Complex64>) -> Vec<Complex64> {
    if let Some(lead) = col.iter().find(|z| z.norm() > 1e-12).copied() {
        let rot = lead.conj() / lead.norm();
        for z in &mut col {
            *z *= rot;
        }
    }
    col
}
