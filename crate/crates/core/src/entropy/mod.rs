//! Entropy functionals. All logarithms are base 2.

pub mod reference;

pub use reference::*;

use serde::Serialize;

use crate::channels::{purification, Channel};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HERMITIAN_TOL};

/// Entries at or above `-PROB_CLAMP` are clamped to zero.
pub const PROB_CLAMP: f64 = 1e-12;
/// Allowed deviation of a probability vector's sum from one.
pub const PROB_SUM_TOL: f64 = 1e-9;
/// Eigenvalues in `[-EIG_CLAMP, 0)` are roundoff and clamped to zero.
pub const EIG_CLAMP: f64 = 1e-10;

/// Non-negative reals summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_clamp(probs, PROB_CLAMP)
    }

    fn with_clamp(mut probs: Vec<f64>, clamp: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -clamp {
                return Err(Error::InvalidProbabilities(format!("entry {p} is negative")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
        }
        Ok(Self(probs))
    }

    /// Clamps negative entries to zero and renormalises. The flag reports
    /// whether any entry was clamped beyond the roundoff threshold.
    pub fn clamp_renormalize(raw: &[f64]) -> Result<(Self, bool)> {
        let clamped = raw.iter().any(|&p| p < -PROB_CLAMP);
        let positive: Vec<f64> = raw.iter().map(|&p| p.max(0.0)).collect();
        let total: f64 = positive.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidProbabilities("no positive mass".into()));
        }
        let probs = positive.into_iter().map(|p| p / total).collect();
        Ok((Self::new(probs)?, clamped))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest entrywise difference; infinite when the lengths differ.
    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        if self.0.len() != other.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `-Σ p_i log2 p_i` with `0 log 0 = 0`.
pub fn shannon(p: &ProbabilityVector) -> f64 {
    entropy_terms(p.as_slice())
}

/// Sum of `-p log2 p` over the strictly positive entries.
pub(crate) fn entropy_terms(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        // fold from +0 so a certain outcome gives 0 rather than -0
        .fold(0.0, |acc, t| acc + t)
}

/// `H2(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter {
            name: "x".into(),
            value: x,
            reason: "binary entropy needs x in [0, 1]".into(),
        });
    }
    Ok(h2(x))
}

/// Unchecked `H2` for arguments known to be in range up to roundoff.
pub(crate) fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    entropy_terms(&[x, 1.0 - x])
}

/// Eigenvalues of a density matrix with roundoff negatives clamped to zero.
pub fn density_spectrum(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    if rho.hermiticity_defect() > HERMITIAN_TOL {
        return Err(Error::NotHermitian(rho.hermiticity_defect()));
    }
    let spectrum = rho.hermitian_eig()?;
    spectrum
        .eigenvalues
        .into_iter()
        .map(|l| {
            if l < -EIG_CLAMP {
                Err(Error::NegativeEigenvalue(l))
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

/// `S(ρ) = -Tr ρ log2 ρ`.
pub fn von_neumann(rho: &ComplexMatrix) -> Result<f64> {
    let eig = density_spectrum(rho)?;
    Ok(shannon(&ProbabilityVector::new(eig)?))
}

/// Entropy of `(I_R ⊗ E)(|Ψ_ρ⟩⟨Ψ_ρ|)` for a purification `Ψ_ρ` of `ρ`.
pub fn entropy_exchange(ch: &Channel, rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != ch.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, channel input is {}",
            rho.rows(),
            rho.cols(),
            ch.d_in()
        )));
    }
    let psi = purification(rho)?;
    von_neumann(&ch.joint_output(&psi)?)
}

/// Single-use coherent information `S(E(ρ)) - S_e(ρ, E)`.
pub fn coherent_information(ch: &Channel, rho: &ComplexMatrix) -> Result<f64> {
    Ok(von_neumann(&ch.apply(rho)?)? - entropy_exchange(ch, rho)?)
}
