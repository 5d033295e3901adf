//! Robustness of coherence as the convex program
//!
//! ```text
//! minimize   sum_i D_ii - 1
//! subject to D diagonal, D - rho >= 0
//! ```
//!
//! solved with a log-barrier method on the `d` diagonal entries. For each
//! barrier weight `mu` the centering problem
//! `sum_i x_i - mu * log det(diag(x) - rho)` is minimized by damped Newton
//! steps; `mu` shrinks by 0.2 from 1 until `d * mu < tol`, at which point the
//! central-path duality gap `d * mu` bounds the suboptimality.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{cholesky, cholesky_solve, eigh, hpd_inverse, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::tolerances::{DIAGONAL_ENTRY_TOL, ROC_TOL_RANGE};

const MU_START: f64 = 1.0;
const MU_SHRINK: f64 = 0.2;
const NEWTON_BUDGET: usize = 2000;
const CENTERING_STEPS: usize = 200;
/// Stop centering when half the squared Newton decrement of `f / mu` is below this.
const DECREMENT_TOL: f64 = 1e-12;
/// Below this Newton decrement a full step stays in the quadratic
/// convergence region of the self-concordant centering objective.
const PURE_NEWTON_DECREMENT: f64 = 0.25;
const ARMIJO: f64 = 0.25;

/// Optimal diagonal witness and solver evidence for one robustness solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocSolution {
    /// `sum_i D_ii - 1`.
    pub value: f64,
    pub witness_diagonal: Vec<f64>,
    /// Duality-gap bound `d * mu` at the last barrier weight.
    pub certified_gap: f64,
    /// Smallest eigenvalue of `D - rho` at the returned witness.
    pub min_slack_eigenvalue: f64,
    pub newton_steps: usize,
}

struct Barrier<'a> {
    rho: &'a ComplexMatrix,
    mu: f64,
}

impl Barrier<'_> {
    fn slack(&self, x: &[f64]) -> ComplexMatrix {
        let mut s = self.rho.scale_real(-1.0);
        for (i, &xi) in x.iter().enumerate() {
            s[(i, i)] += Complex64::new(xi, 0.0);
        }
        s
    }

    /// Objective value, or `None` outside the open feasible set.
    fn value(&self, x: &[f64]) -> Option<f64> {
        let l = cholesky(&self.slack(x))?;
        let log_det: f64 = (0..x.len()).map(|i| 2.0 * l[(i, i)].re.ln()).sum();
        Some(x.iter().sum::<f64>() - self.mu * log_det)
    }
}

/// Solves for the robustness of coherence of `rho` to absolute accuracy `tol`.
pub fn robustness_of_coherence(rho: &DensityMatrix, tol: f64) -> Result<RocSolution> {
    let (lo, hi) = ROC_TOL_RANGE;
    if !(lo..=hi).contains(&tol) {
        return Err(Error::InvalidArgument(format!(
            "robustness tolerance {tol:e} outside [{lo:e}, {hi:e}]"
        )));
    }
    let d = rho.dim();
    let populations = rho.populations();
    if rho.is_diagonal(DIAGONAL_ENTRY_TOL) {
        return Ok(RocSolution {
            value: 0.0,
            witness_diagonal: populations,
            certified_gap: 0.0,
            min_slack_eigenvalue: 0.0,
            newton_steps: 0,
        });
    }

    let shift = rho.matrix().frobenius_norm();
    let mut x: Vec<f64> = populations.iter().map(|p| p + shift).collect();
    let mut barrier = Barrier {
        rho: rho.matrix(),
        mu: MU_START,
    };
    let mut steps = 0usize;

    loop {
        center(&barrier, &mut x, &mut steps)?;
        if d as f64 * barrier.mu < tol {
            break;
        }
        barrier.mu *= MU_SHRINK;
    }

    let min_slack = eigh(&barrier.slack(&x))?.min_eigenvalue();
    Ok(RocSolution {
        value: x.iter().sum::<f64>() - 1.0,
        witness_diagonal: x,
        certified_gap: d as f64 * barrier.mu,
        min_slack_eigenvalue: min_slack,
        newton_steps: steps,
    })
}

fn failure(x: &[f64], steps: usize, residual: f64) -> Error {
    Error::SolverFailure {
        iterations: steps,
        value: x.iter().sum::<f64>() - 1.0,
        residual,
    }
}

fn center(barrier: &Barrier<'_>, x: &mut Vec<f64>, steps: &mut usize) -> Result<()> {
    let d = x.len();
    let mu = barrier.mu;
    let mut decrement = f64::INFINITY;
    for _ in 0..CENTERING_STEPS {
        if *steps >= NEWTON_BUDGET {
            return Err(failure(x, *steps, decrement));
        }
        let inv = hpd_inverse(&barrier.slack(x)).ok_or_else(|| failure(x, *steps, decrement))?;

        // gradient 1 - mu * inv_ii, Hessian mu * |inv_ij|^2
        let grad: Vec<f64> = (0..d).map(|i| 1.0 - mu * inv[(i, i)].re).collect();
        let hess = ComplexMatrix::from_fn(d, |i, j| Complex64::new(mu * inv[(i, j)].norm_sqr(), 0.0));
        let l = cholesky(&hess).ok_or_else(|| failure(x, *steps, decrement))?;
        let rhs: Vec<Complex64> = grad.iter().map(|&g| Complex64::new(-g, 0.0)).collect();
        let step: Vec<f64> = cholesky_solve(&l, &rhs).into_iter().map(|z| z.re).collect();

        let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
        decrement = -slope / mu;
        if decrement / 2.0 <= DECREMENT_TOL {
            return Ok(());
        }

        if decrement.sqrt() < PURE_NEWTON_DECREMENT {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + si).collect();
            if barrier.value(&trial).is_some() {
                *x = trial;
                *steps += 1;
                continue;
            }
        }

        let f0 = barrier.value(x).ok_or_else(|| failure(x, *steps, decrement))?;
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + t * si).collect();
            match barrier.value(&trial) {
                Some(f) if f <= f0 + ARMIJO * t * slope => {
                    *x = trial;
                    break;
                }
                _ => {
                    t *= 0.5;
                    if t < 1e-20 {
                        return Err(failure(x, *steps, decrement));
                    }
                }
            }
        }
        *steps += 1;
    }
    Err(failure(x, *steps, decrement))
}
