//! Independent oracles shared by the integration suites. Nothing here calls
//! the pipeline it is used to check.
#![allow(dead_code)]

use decoherence_lab::numkernel::{eigh, ComplexMatrix};
use decoherence_lab::states::DensityMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random Hermitian `(G + G^H) / 2` with Gaussian-ish entries in [-1, 1].
pub fn random_hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    g.hermitian_part()
}

pub fn random_matrix(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Random incoherent state with uniform-simplex-ish populations.
pub fn random_diagonal_state(d: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0f64) + 1e-3).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&p)).unwrap()
}

/// `tau = sum_ij <j|rho|i> |i><j|`, written out entry by entry.
pub fn environment_by_definition(rho: &DensityMatrix) -> ComplexMatrix {
    let d = rho.dim();
    let mut tau = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            tau[(i, j)] = rho[(j, i)];
        }
    }
    tau
}

/// `Tr(rho H^2) - Tr(sqrt(rho) H sqrt(rho) H)` with an explicit square root.
pub fn skew_information_by_traces(rho: &ComplexMatrix, root: &ComplexMatrix, h: &ComplexMatrix) -> f64 {
    let h2 = h * h;
    let first = (rho * &h2).trace().re;
    let a = &(root * h) * root;
    first - (&a * h).trace().re
}

/// Smallest eigenvalue of `diag(x) - rho`.
fn min_slack(rho: &ComplexMatrix, x: &[f64]) -> f64 {
    let mut s = rho.scale_real(-1.0);
    for (i, &xi) in x.iter().enumerate() {
        s[(i, i)] += c(xi, 0.0);
    }
    eigh(&s).unwrap().min_eigenvalue()
}

/// Minimal feasible last diagonal entry given the others, by bisection on
/// `lambda_min(diag(x) - rho) >= 0`; `None` when no value works.
fn minimal_last_entry(rho: &ComplexMatrix, head: &[f64]) -> Option<f64> {
    let d = rho.dim();
    let base = rho[(d - 1, d - 1)].re;
    let mut x = head.to_vec();
    x.push(base + 10.0);
    if min_slack(rho, &x) < 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (base, base + 10.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        x[d - 1] = mid;
        if min_slack(rho, &x) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Robustness of coherence by brute force: a zooming grid over the first
/// `d - 1` diagonal entries, with the last entry set to its minimal feasible
/// value. Returns `min sum(x) - 1`.
pub fn brute_force_robustness(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let d = rho.dim();
    let pops = rho.populations();
    let l1: f64 = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| m[(i, j)].norm())
        .sum();
    if d == 1 || l1 == 0.0 {
        return 0.0;
    }
    let free = d - 1;
    let points = 5usize;
    let mut center: Vec<f64> = pops[..free].iter().map(|p| p + l1 / 2.0).collect();
    let mut half = l1 / 2.0;
    let mut best = f64::INFINITY;
    while half > 1e-10 {
        let mut best_point = center.clone();
        let total = points.pow(free as u32);
        for idx in 0..total {
            let mut rem = idx;
            let head: Vec<f64> = (0..free)
                .map(|k| {
                    let step = rem % points;
                    rem /= points;
                    let offset = -half + 2.0 * half * step as f64 / (points - 1) as f64;
                    (center[k] + offset).max(pops[k])
                })
                .collect();
            if let Some(last) = minimal_last_entry(m, &head) {
                let value = head.iter().sum::<f64>() + last - 1.0;
                if value < best {
                    best = value;
                    best_point = head;
                }
            }
        }
        center = best_point;
        half *= 0.5;
    }
    best
}

/// Qubit robustness by a fine one-dimensional scan: with `u = a - rho_00`,
/// the optimal `b - rho_11` is `|rho_01|^2 / u`, so minimize `u + |rho_01|^2 / u`.
pub fn qubit_robustness_scan(rho: &DensityMatrix) -> f64 {
    let c2 = rho[(0, 1)].norm_sqr();
    if c2 == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (1e-12f64, 2.0f64);
    for _ in 0..60 {
        let grid: Vec<f64> = (0..=20).map(|k| lo + (hi - lo) * k as f64 / 20.0).collect();
        let (k_best, _) = grid
            .iter()
            .map(|&u| u + c2 / u)
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
        lo = grid[k_best.saturating_sub(1)].max(1e-15);
        hi = grid[(k_best + 1).min(20)];
    }
    let u = 0.5 * (lo + hi);
    u + c2 / u
}
