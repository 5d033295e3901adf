//! Coherence measures relative to the fixed coherence basis.
//!
//! All entropies are in bits.

mod robustness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::dephase;
use crate::numkernel::{eigh, matrix_sqrt, sqrt_spectrum, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::tolerances::{HERMITIAN_TOL, ROC_DEFAULT_TOL};

pub use robustness::{robustness_of_coherence, RocSolution};

/// The coherence measures this crate evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "rel-entropy")]
    RelativeEntropy,
    #[serde(rename = "wy")]
    WignerYanase,
    #[serde(rename = "roc")]
    Robustness,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::L1,
        MeasureKind::RelativeEntropy,
        MeasureKind::WignerYanase,
        MeasureKind::Robustness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::L1 => "l1",
            MeasureKind::RelativeEntropy => "rel-entropy",
            MeasureKind::WignerYanase => "wy",
            MeasureKind::Robustness => "roc",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Ok(MeasureKind::L1),
            "rel-entropy" | "relative-entropy" | "re" => Ok(MeasureKind::RelativeEntropy),
            "wy" | "wigner-yanase" => Ok(MeasureKind::WignerYanase),
            "roc" | "robustness" => Ok(MeasureKind::Robustness),
            other => Err(Error::InvalidArgument(format!(
                "unknown measure '{other}' (expected l1, rel-entropy, wy or roc)"
            ))),
        }
    }
}

/// `sum_{i != j} |rho_ij|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += rho[(i, j)].norm();
            }
        }
    }
    acc
}

/// `-sum_k lambda_k log2 lambda_k`, eigenvalues clipped to `[0, 1]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let e = eigh(rho.matrix())?;
    Ok(entropy_of_spectrum(&e.eigenvalues))
}

/// Shannon entropy (bits) of a spectrum after clipping to `[0, 1]`.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// `S(Phi(rho)) - S(rho)`.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    // Phi(rho) is diagonal: its entropy is that of the populations.
    let dephased = entropy_of_spectrum(&dephase(rho).populations());
    Ok((dephased - von_neumann_entropy(rho)?).max(0.0))
}

/// Wigner-Yanase skew information `Tr(rho H^2) - Tr(sqrt(rho) H sqrt(rho) H)`.
pub fn wy_skew_information(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: h.dim(),
        });
    }
    let residual = h.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    // In the eigenbasis of rho the skew information is
    // (1/2) sum_kl (sqrt(l_k) - sqrt(l_l))^2 |<k|H|l>|^2, which is
    // non-negative term by term and exactly zero when rho and H share a basis.
    let e = eigh(rho.matrix())?;
    let v = &e.eigenvectors;
    let h_eig = &(&v.adjoint() * h) * v;
    let roots = sqrt_spectrum(&e.eigenvalues)?;
    let d = rho.dim();
    let mut total = 0.0;
    for k in 0..d {
        for l in (k + 1)..d {
            let diff = roots[k] - roots[l];
            total += diff * diff * h_eig[(k, l)].norm_sqr();
        }
    }
    Ok(total)
}

/// `<i|sqrt(rho)|i>` for every basis index.
pub fn sqrt_diagonal(rho: &DensityMatrix) -> Result<Vec<f64>> {
    Ok(matrix_sqrt(rho.matrix())?.real_diagonal())
}

/// Wigner-Yanase coherence `sum_i I(rho, |i><i|)`, evaluated through the
/// equivalent closed form `1 - sum_i <i|sqrt(rho)|i>^2`.
pub fn wy_coherence(rho: &DensityMatrix) -> Result<f64> {
    // Every term I(rho, |i><i|) vanishes on incoherent states.
    if rho.is_diagonal(0.0) {
        return Ok(0.0);
    }
    let diag = sqrt_diagonal(rho)?;
    Ok((1.0 - diag.iter().map(|x| x * x).sum::<f64>()).max(0.0))
}

/// Wigner-Yanase coherence summed term by term from skew informations.
pub fn wy_coherence_skew_sum(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim();
    let mut total = 0.0;
    for i in 0..d {
        let mut p = vec![0.0; d];
        p[i] = 1.0;
        total += wy_skew_information(rho, &ComplexMatrix::from_real_diagonal(&p))?;
    }
    Ok(total)
}

/// Evaluates `kind` on `rho`; robustness uses the default solver tolerance.
pub fn coherence(rho: &DensityMatrix, kind: MeasureKind) -> Result<f64> {
    coherence_with_tol(rho, kind, ROC_DEFAULT_TOL)
}

pub fn coherence_with_tol(rho: &DensityMatrix, kind: MeasureKind, roc_tol: f64) -> Result<f64> {
    match kind {
        MeasureKind::L1 => Ok(l1_coherence(rho)),
        MeasureKind::RelativeEntropy => relative_entropy_coherence(rho),
        MeasureKind::WignerYanase => wy_coherence(rho),
        MeasureKind::Robustness => Ok(robustness_of_coherence(rho, roc_tol)?.value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{basis_state, maximally_coherent, maximally_mixed, random_pure_state};
    use num_complex::Complex64;

    fn plus() -> DensityMatrix {
        maximally_coherent(2).unwrap()
    }

    #[test]
    fn measure_kind_round_trips() {
        for k in MeasureKind::ALL {
            assert_eq!(k.to_string().parse::<MeasureKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
            assert_eq!(serde_json::from_str::<MeasureKind>(&json).unwrap(), k);
        }
        assert!("trace-distance".parse::<MeasureKind>().is_err());
    }

    #[test]
    fn l1_values() {
        let diag = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.1, 0.9])).unwrap();
        assert_eq!(l1_coherence(&diag), 0.0);
        assert!((l1_coherence(&plus()) - 1.0).abs() < 1e-15);
        for d in 1..=6 {
            let got = l1_coherence(&maximally_coherent(d).unwrap());
            assert!((got - (d as f64 - 1.0)).abs() < 1e-12, "d={d}: {got}");
        }
    }

    #[test]
    fn entropy_values() {
        assert!(von_neumann_entropy(&random_pure_state(4, 3).unwrap()).unwrap().abs() < 1e-10);
        for d in [1usize, 2, 3, 8] {
            let s = von_neumann_entropy(&maximally_mixed(d).unwrap()).unwrap();
            assert!((s - (d as f64).log2()).abs() < 1e-12);
        }
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap();
        let expected = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((expected - 0.811_278_124_459_132_9).abs() < 1e-15);
        assert!((von_neumann_entropy(&rho).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_values() {
        let diag = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.6, 0.3, 0.1])).unwrap();
        assert_eq!(relative_entropy_coherence(&diag).unwrap(), 0.0);
        assert_eq!(relative_entropy_coherence(&maximally_mixed(3).unwrap()).unwrap(), 0.0);
        for d in 2..=5 {
            let got = relative_entropy_coherence(&maximally_coherent(d).unwrap()).unwrap();
            assert!((got - (d as f64).log2()).abs() < 1e-9);
        }
    }

    #[test]
    fn skew_information_cases() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.4, 0.6])).unwrap();
        let h = ComplexMatrix::from_real_diagonal(&[2.0, -1.0]);
        assert_eq!(wy_skew_information(&rho, &h).unwrap(), 0.0);

        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!((wy_skew_information(&plus(), &p0).unwrap() - 0.25).abs() < 1e-12);

        // Pure states: skew information is the variance of H.
        let rho = random_pure_state(3, 21).unwrap();
        let h = ComplexMatrix::from_fn(3, |i, j| {
            Complex64::new((i + j) as f64, i as f64 - j as f64)
        });
        let mean = (rho.matrix() * &h).trace().re;
        let second = (rho.matrix() * &(&h * &h)).trace().re;
        assert!((wy_skew_information(&rho, &h).unwrap() - (second - mean * mean)).abs() < 1e-9);

        assert!(matches!(
            wy_skew_information(&plus(), &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let skew = ComplexMatrix::from_fn(2, |i, j| Complex64::new(i as f64, j as f64 * 2.0));
        assert!(matches!(wy_skew_information(&plus(), &skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn wy_values_and_forms_agree() {
        let diag = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap();
        assert_eq!(wy_coherence(&diag).unwrap(), 0.0);
        assert_eq!(wy_coherence_skew_sum(&diag).unwrap(), 0.0);
        assert!((wy_coherence(&plus()).unwrap() - 0.5).abs() < 1e-12);
        for d in 2..=6 {
            let rho = maximally_coherent(d).unwrap();
            assert!((wy_coherence(&rho).unwrap() - (1.0 - 1.0 / d as f64)).abs() < 1e-9);
            assert!((wy_coherence_skew_sum(&rho).unwrap() - wy_coherence(&rho).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn dispatch() {
        let diag = basis_state(3, 1).unwrap();
        for k in MeasureKind::ALL {
            assert!(coherence(&diag, k).unwrap().abs() < 1e-10, "{k}");
        }
        assert!((coherence(&plus(), MeasureKind::L1).unwrap() - 1.0).abs() < 1e-15);
        assert!((coherence(&plus(), MeasureKind::RelativeEntropy).unwrap() - 1.0).abs() < 1e-10);
        assert!((coherence(&plus(), MeasureKind::Robustness).unwrap() - 1.0).abs() < 1e-6);
    }
}
