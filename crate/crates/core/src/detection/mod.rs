//! Detection of capacity lower bounds from entangled-basis measurements.
//!
//! The input is always the maximally entangled state, so the system sees
//! `I/d` and the joint output is the channel's Choi state. A basis `{Φ_i}`
//! yields `p_i = ⟨Φ_i|(I ⊗ E)(|Ψ⟩⟨Ψ|)|Φ_i⟩` and
//! `Q_DET = S(E(I/d)) - H(p)`.

pub mod basis;
pub mod optimize;
pub mod pauli;
pub mod sweep;

pub use basis::{bell_states, Basis, BasisFamily, BasisSpec};
pub use optimize::{optimize_qdet, optimize_with};
pub use pauli::{pauli_projector_decomposition, PauliWeights};
pub use sweep::{sweep, Axis, ChannelSpec, FamilyKind, Mode, SweepRow};

use serde::Serialize;

use crate::channels::Channel;
use crate::entropy::{self, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::{expectation, ComplexMatrix};

/// A detected bound together with the quantities it was built from.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// `S(E(I/d)) - H(p)`; also a lower bound on the private capacity.
    pub q_det: f64,
    /// `log2 d + q_det`, a lower bound on the entanglement-assisted capacity.
    pub ce_lower: f64,
    pub p_lower: f64,
    pub output_entropy: f64,
    pub shannon_entropy: f64,
    pub prob_vector: ProbabilityVector,
    pub basis: BasisSpec,
    /// Set when an estimated probability vector needed negative entries
    /// clamped before the entropy could be taken.
    pub clamped: bool,
}

impl BoundReport {
    pub fn new(
        output_entropy: f64,
        prob_vector: ProbabilityVector,
        basis: BasisSpec,
        d_in: usize,
        clamped: bool,
    ) -> Self {
        let shannon_entropy = entropy::shannon(&prob_vector);
        let q_det = output_entropy - shannon_entropy;
        Self {
            q_det,
            ce_lower: (d_in as f64).log2() + q_det,
            p_lower: q_det,
            output_entropy,
            shannon_entropy,
            prob_vector,
            basis,
            clamped,
        }
    }
}

/// Born-rule probabilities of `joint_output` in `basis`.
pub fn probability_vector(joint_output: &ComplexMatrix, basis: &Basis) -> Result<ProbabilityVector> {
    let n = joint_output.rows();
    if !joint_output.is_square() || basis.space_dim() != n || basis.vectors().len() != n {
        return Err(Error::DimensionMismatch(format!(
            "basis of {} vectors of length {} against a {}x{} state",
            basis.vectors().len(),
            basis.space_dim(),
            joint_output.rows(),
            joint_output.cols()
        )));
    }
    let probs = basis
        .vectors()
        .iter()
        .map(|v| expectation(joint_output, v))
        .collect::<Result<Vec<_>>>()?;
    ProbabilityVector::new(probs)
}

/// Generalised-Bell probabilities straight from the Kraus operators,
/// `p_mn = (1/d²) Σ_j |Tr[U_mn† A_j]|²`.
pub fn probability_vector_from_kraus(ch: &Channel) -> Result<ProbabilityVector> {
    if !ch.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Kraus-trace formula needs d_in = d_out, got {} and {}",
            ch.d_in(),
            ch.d_out()
        )));
    }
    let d = ch.d_in();
    let norm = 1.0 / (d * d) as f64;
    let probs = crate::channels::weyl_operators(d)
        .iter()
        .map(|u| {
            ch.kraus()
                .iter()
                .map(|a| {
                    let overlap: crate::linalg::Complex = (0..d)
                        .flat_map(|k| (0..d).map(move |l| (k, l)))
                        .map(|(k, l)| u[(l, k)].conj() * a[(l, k)])
                        .sum();
                    overlap.norm_sqr()
                })
                .sum::<f64>()
                * norm
        })
        .collect();
    ProbabilityVector::new(probs)
}

/// `S(E(I/d))`
pub fn output_entropy(ch: &Channel) -> Result<f64> {
    let d = ch.d_in();
    let mixed = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    entropy::von_neumann(&ch.apply(&mixed)?)
}

/// `Q_DET` for a fixed basis.
pub fn q_det(ch: &Channel, basis: &Basis) -> Result<BoundReport> {
    let p = probability_vector(&ch.choi_output(), basis)?;
    Ok(BoundReport::new(output_entropy(ch)?, p, *basis.spec(), ch.d_in(), false))
}

/// `Q_DET` in the natural fixed basis for the channel's shape: the Bell
/// basis for qubits, generalised Bell for `d > 2`, and the flag-augmented
/// basis when the output has one extra (erasure) level.
pub fn q_det_default(ch: &Channel) -> Result<BoundReport> {
    let spec = default_basis(ch)?;
    q_det(ch, &Basis::build(&spec)?)
}

pub fn default_basis(ch: &Channel) -> Result<BasisSpec> {
    let d = ch.d_in();
    match (ch.d_in(), ch.d_out()) {
        (2, 2) => Ok(BasisSpec::bell()),
        (i, o) if i == o => Ok(BasisSpec::generalized_bell(d)),
        (i, o) if o == i + 1 => Ok(BasisSpec::erasure_flag(d)),
        (i, o) => Err(Error::UnsupportedBasis(format!(
            "no built-in basis for a {i} -> {o} channel"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::*;
    use crate::entropy::h2;

    #[test]
    fn identity_gives_one_bit() {
        let r = q_det(&Channel::identity(2), &Basis::build(&BasisSpec::bell()).unwrap()).unwrap();
        assert!((r.q_det - 1.0).abs() < 1e-12);
        assert!((r.ce_lower - 2.0).abs() < 1e-12);
        assert_eq!(r.prob_vector.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn depolarizing_bell_vector_and_bound() {
        let ch = make_depolarizing(0.1, 2).unwrap();
        let r = q_det_default(&ch).unwrap();
        let third = 0.1 / 3.0;
        assert!(r.prob_vector.max_abs_diff(&[0.9, third, third, third]) < 1e-12);
        assert!((r.q_det - 0.372508).abs() < 1e-6);
    }

    #[test]
    fn amplitude_damping_bell_vector() {
        for gamma in [0.0, 0.2, 0.5, 0.9] {
            let ch = make_amplitude_damping(gamma).unwrap();
            let s = (1.0 - gamma).sqrt();
            let expected = [(1.0 + s).powi(2) / 4.0, (1.0 - s).powi(2) / 4.0, gamma / 4.0, gamma / 4.0];
            let born = probability_vector(&ch.choi_output(), &Basis::build(&BasisSpec::bell()).unwrap()).unwrap();
            assert!(born.max_abs_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn kraus_formula_examples() {
        let id = probability_vector_from_kraus(&Channel::identity(3)).unwrap();
        assert_eq!(id.as_slice()[0], 1.0);
        assert!(id.as_slice()[1..].iter().all(|&p| p.abs() < 1e-15));

        let weights: Vec<f64> = (1..=9).map(|k| k as f64 / 45.0).collect();
        let ch = make_generalized_pauli(&weights, 3).unwrap();
        assert!(probability_vector_from_kraus(&ch).unwrap().max_abs_diff(&weights) < 1e-12);

        let gamma: f64 = 0.3;
        let ad = probability_vector_from_kraus(&make_amplitude_damping(gamma).unwrap()).unwrap();
        let s = (1.0 - gamma).sqrt();
        // generalised Bell order at d=2 is (Φ+, Ψ+, Φ-, Ψ-)
        let expected = [(1.0 + s).powi(2) / 4.0, gamma / 4.0, (1.0 - s).powi(2) / 4.0, gamma / 4.0];
        assert!(ad.max_abs_diff(&expected) < 1e-12);

        assert!(probability_vector_from_kraus(&make_erasure(0.1, 2).unwrap()).is_err());
    }

    #[test]
    fn erasure_flag_bound_is_capacity() {
        let r = q_det_default(&make_erasure(0.25, 2).unwrap()).unwrap();
        assert_eq!(r.basis.family, BasisFamily::ErasureFlag);
        assert!((r.q_det - 0.5).abs() < 1e-12);
        assert!((r.shannon_entropy - (h2(0.25) + 0.25)).abs() < 1e-12);
        assert!((r.output_entropy - (h2(0.25) + 0.75)).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let ch = make_depolarizing(0.1, 3).unwrap();
        let bell = Basis::build(&BasisSpec::bell()).unwrap();
        assert!(matches!(q_det(&ch, &bell), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn report_invariants() {
        let r = q_det_default(&make_dephasing(0.3, 4, None).unwrap()).unwrap();
        assert!((r.q_det - (r.output_entropy - entropy::shannon(&r.prob_vector))).abs() < 1e-12);
        assert!((r.ce_lower - (2.0 + r.q_det)).abs() < 1e-12);
        assert_eq!(r.p_lower, r.q_det);
    }
}
