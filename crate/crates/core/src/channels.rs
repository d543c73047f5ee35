//! Quantum channels in Kraus form and the standard channel zoo.
//!
//! Composite spaces are always ordered reference first: index `r * d_out + s`
//! for reference level `r` and system level `s`.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Complex, ComplexMatrix, ONE, ZERO};

/// Completeness tolerance for channels built in code.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Completeness tolerance for channels read from a document.
pub const DOCUMENT_COMPLETENESS_TOL: f64 = 1e-8;

const DENSITY_TOL: f64 = 1e-9;

/// A completely positive trace-preserving map `ρ ↦ Σ_j A_j ρ A_j†`.
#[derive(Clone, Debug)]
pub struct Channel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
    label: String,
}

impl Channel {
    /// Validates shapes and `Σ_j A_j†A_j = I` within [`COMPLETENESS_TOL`].
    pub fn new(
        d_in: usize,
        d_out: usize,
        kraus: Vec<ComplexMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::with_tolerance(d_in, d_out, kraus, label, COMPLETENESS_TOL)
    }

    pub fn with_tolerance(
        d_in: usize,
        d_out: usize,
        kraus: Vec<ComplexMatrix>,
        label: impl Into<String>,
        tol: f64,
    ) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::DimensionMismatch("channel dimensions must be positive".into()));
        }
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch("a channel needs at least one Kraus operator".into()));
        }
        if let Some(bad) = kraus.iter().find(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator is {}x{}, expected {d_out}x{d_in}",
                bad.rows(),
                bad.cols()
            )));
        }
        let ch = Self {
            d_in,
            d_out,
            kraus,
            label: label.into(),
        };
        let residual = ch.completeness_residual();
        if residual > tol {
            return Err(Error::Completeness(residual));
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self::new(d, d, vec![ComplexMatrix::identity(d)], "identity").expect("identity is CPTP")
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_square(&self) -> bool {
        self.d_in == self.d_out
    }

    /// Largest entrywise deviation of `Σ_j A_j†A_j` from the identity.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.d_in, self.d_in);
        for a in &self.kraus {
            sum = &sum + &(&a.dagger() * a);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.d_in))
    }

    /// `E(ρ)`. The input must be a Hermitian, unit-trace `d_in x d_in` matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_density(rho, self.d_in)?;
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for a in &self.kraus {
            out = &out + &(&(a * rho) * &a.dagger());
        }
        Ok(out)
    }

    /// `(I_R ⊗ E)(|ψ⟩⟨ψ|)` for a pure state `ψ` on `R ⊗ S`, with `R` of
    /// dimension `psi.len() / d_in`.
    pub fn joint_output(&self, psi: &[Complex]) -> Result<ComplexMatrix> {
        if psi.is_empty() || !psi.len().is_multiple_of(self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "state of length {} is not on R ⊗ C^{}",
                psi.len(),
                self.d_in
            )));
        }
        let d_ref = psi.len() / self.d_in;
        let n = d_ref * self.d_out;
        let mut out = ComplexMatrix::zeros(n, n);
        let mut branch = vec![ZERO; n];
        for a in &self.kraus {
            for r in 0..d_ref {
                for o in 0..self.d_out {
                    branch[r * self.d_out + o] = (0..self.d_in)
                        .map(|i| a[(o, i)] * psi[r * self.d_in + i])
                        .sum();
                }
            }
            for i in 0..n {
                if branch[i] == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += branch[i] * branch[j].conj();
                }
            }
        }
        Ok(out)
    }

    /// Joint output for the maximally entangled input `(1/√d) Σ_i |ii⟩`,
    /// `d = d_in`. A `(d·d_out) x (d·d_out)` density matrix.
    pub fn choi_output(&self) -> ComplexMatrix {
        self.joint_output(&max_entangled(self.d_in))
            .expect("maximally entangled state has matching dimension")
    }

    pub fn to_document(&self) -> ChannelDocument {
        let rows = |m: &ComplexMatrix, part: fn(&Complex) -> f64| -> Vec<Vec<f64>> {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| part(&m[(i, j)])).collect())
                .collect()
        };
        ChannelDocument {
            d_in: self.d_in,
            d_out: self.d_out,
            label: Some(self.label.clone()),
            kraus: self
                .kraus
                .iter()
                .map(|k| KrausEntry {
                    re: rows(k, |z| z.re),
                    im: Some(rows(k, |z| z.im)),
                })
                .collect(),
        }
    }
}

fn check_density(rho: &ComplexMatrix, d: usize) -> Result<()> {
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "expected a {d}x{d} state, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let defect = rho.hermiticity_defect();
    if defect > DENSITY_TOL {
        return Err(Error::NotDensity(format!("Hermiticity defect {defect:e}")));
    }
    let tr = rho.trace()?;
    if (tr - ONE).norm() > DENSITY_TOL {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    Ok(())
}

/// `(1/√d) Σ_i |ii⟩`
pub fn max_entangled(d: usize) -> Vec<Complex> {
    let mut v = vec![ZERO; d * d];
    let amp = Complex::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

/// A purification `Σ_k √λ_k |k⟩_R ⊗ |v_k⟩` of `ρ`, with a reference of the
/// same dimension as `ρ`.
pub fn purification(rho: &ComplexMatrix) -> Result<Vec<Complex>> {
    check_density(rho, rho.rows())?;
    let d = rho.rows();
    let spec = rho.hermitian_eig()?;
    let mut psi = vec![ZERO; d * d];
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        if lambda < -1e-10 {
            return Err(Error::NegativeEigenvalue(lambda));
        }
        let w = lambda.max(0.0).sqrt();
        for s in 0..d {
            psi[k * d + s] = spec.eigenvectors[(s, k)] * w;
        }
    }
    Ok(psi)
}

/// Weyl operator `U_mn = Σ_k e^{2πi km/d} |k⟩⟨(k+n) mod d|`; `m` is the
/// phase index and `n` the shift.
pub fn weyl(m: usize, n: usize, d: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        let phase = 2.0 * PI * ((k * m) % d) as f64 / d as f64;
        u[(k, (k + n) % d)] = Complex::from_polar(1.0, phase);
    }
    u
}

/// All `d²` Weyl operators ordered by `m * d + n`.
pub fn weyl_operators(d: usize) -> Vec<ComplexMatrix> {
    (0..d)
        .flat_map(|m| (0..d).map(move |n| weyl(m, n, d)))
        .collect()
}

fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter {
            name: name.into(),
            value,
            reason: "must lie in [0, 1]".into(),
        });
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter {
            name: "d".into(),
            value: d as f64,
            reason: "dimension must be at least 2".into(),
        });
    }
    Ok(())
}

/// `ρ ↦ (1 - p/2) ρ + (p/2) U ρ U†` for a traceless unitary `U`. Without an
/// explicit `U` this uses `σz` for `d = 2` and the cyclic shift `U_01` above.
pub fn make_dephasing(p: f64, d: usize, u: Option<&ComplexMatrix>) -> Result<Channel> {
    check_unit_interval("p", p)?;
    check_dim(d)?;
    let u = match u {
        Some(u) => {
            if u.rows() != d || u.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "dephasing unitary must be {d}x{d}, got {}x{}",
                    u.rows(),
                    u.cols()
                )));
            }
            let defect = u.unitarity_defect();
            if defect > 1e-10 {
                return Err(Error::NotUnitary(defect));
            }
            let tr = u.trace()?.norm();
            if tr > 1e-10 {
                return Err(Error::NotTraceless(tr));
            }
            u.clone()
        }
        None if d == 2 => weyl(1, 0, 2),
        None => weyl(0, 1, d),
    };
    let kraus = vec![
        ComplexMatrix::identity(d).scale_real((1.0 - p / 2.0).sqrt()),
        u.scale_real((p / 2.0).sqrt()),
    ];
    Channel::new(d, d, kraus, format!("dephasing(p={p}, d={d})"))
}

/// Depolarizing channel `(1 - p d²/(d²-1)) ρ + p d²/(d²-1) I/d`, realised as
/// Weyl weights `w_00 = 1 - p`, `w_mn = p/(d²-1)`. For `d = 2` this is
/// `(1-p)ρ + (p/3) Σ_i σ_i ρ σ_i`.
pub fn make_depolarizing(p: f64, d: usize) -> Result<Channel> {
    check_unit_interval("p", p)?;
    check_dim(d)?;
    let d2 = d * d;
    let mut weights = vec![p / (d2 - 1) as f64; d2];
    weights[0] = 1.0 - p;
    let mut ch = make_generalized_pauli(&weights, d)?;
    ch.label = format!("depolarizing(p={p}, d={d})");
    Ok(ch)
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if let Some(&w) = weights.iter().find(|&&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidProbabilities(format!("negative or non-finite weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbabilities(format!("weights sum to {total}")));
    }
    Ok(())
}

/// Qubit Pauli channel `Σ_i p_i σ_i ρ σ_i` with `σ_0 = I`.
pub fn make_pauli(weights: [f64; 4]) -> Result<Channel> {
    check_weights(&weights)?;
    let kraus = linalg::paulis()
        .iter()
        .zip(weights)
        .map(|(s, w)| s.scale_real(w.sqrt()))
        .collect();
    Channel::new(2, 2, kraus, format!("pauli({weights:?})"))
}

/// `Σ_mn p_mn U_mn ρ U_mn†`, weights indexed by `m * d + n`.
pub fn make_generalized_pauli(weights: &[f64], d: usize) -> Result<Channel> {
    check_dim(d)?;
    if weights.len() != d * d {
        return Err(Error::InvalidProbabilities(format!(
            "expected {} weights for d={d}, got {}",
            d * d,
            weights.len()
        )));
    }
    check_weights(weights)?;
    let kraus = weyl_operators(d)
        .iter()
        .zip(weights)
        .map(|(u, &w)| u.scale_real(w.sqrt()))
        .collect();
    Channel::new(d, d, kraus, format!("generalized-pauli(d={d})"))
}

/// Erasure channel `(1-p) ρ ⊕ p |e⟩⟨e|`. Output levels `0..d` carry the
/// system and level `d` is the flag.
pub fn make_erasure(p: f64, d: usize) -> Result<Channel> {
    check_unit_interval("p", p)?;
    check_dim(d)?;
    let keep = (1.0 - p).sqrt();
    let lose = p.sqrt();
    let mut kraus = vec![ComplexMatrix::from_fn(d + 1, d, |i, j| {
        if i == j {
            Complex::new(keep, 0.0)
        } else {
            ZERO
        }
    })];
    for i in 0..d {
        let mut flag = ComplexMatrix::zeros(d + 1, d);
        flag[(d, i)] = Complex::new(lose, 0.0);
        kraus.push(flag);
    }
    Channel::new(d, d + 1, kraus, format!("erasure(p={p}, d={d})"))
}

/// Amplitude damping: `A0 = |0⟩⟨0| + √(1-γ)|1⟩⟨1|`, `A1 = √γ |0⟩⟨1|`.
pub fn make_amplitude_damping(gamma: f64) -> Result<Channel> {
    check_unit_interval("gamma", gamma)?;
    let a0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()]);
    let a1 = ComplexMatrix::from_real(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0]);
    Channel::new(2, 2, vec![a0, a1], format!("amplitude-damping(gamma={gamma})"))
}

/// `A1 = cos α |0⟩⟨0| + cos β |1⟩⟨1|`, `A2 = sin β |0⟩⟨1| + sin α |1⟩⟨0|`.
pub fn make_two_kraus(alpha: f64, beta: f64) -> Result<Channel> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                name: name.into(),
                value: v,
                reason: "must be finite".into(),
            });
        }
    }
    let a1 = ComplexMatrix::from_real(2, 2, &[alpha.cos(), 0.0, 0.0, beta.cos()]);
    let a2 = ComplexMatrix::from_real(2, 2, &[0.0, beta.sin(), alpha.sin(), 0.0]);
    Channel::new(2, 2, vec![a1, a2], format!("two-kraus(alpha={alpha}, beta={beta})"))
}

/// Random channel with `rank` Kraus operators, cut from a random isometry
/// `C^d → C^(rank·d)`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Channel {
    let v = linalg::random_isometry(rank * d, d, rng);
    let kraus = (0..rank)
        .map(|k| ComplexMatrix::from_fn(d, d, |i, j| v[(k * d + i, j)]))
        .collect();
    Channel::new(d, d, kraus, format!("random(d={d}, rank={rank})")).expect("isometry is complete")
}

/// One Kraus operator as row-major real and imaginary parts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KrausEntry {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

/// JSON layout of a custom channel.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub d_in: usize,
    pub d_out: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub kraus: Vec<KrausEntry>,
}

impl ChannelDocument {
    /// Builds the matrices without checking completeness.
    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>> {
        self.kraus
            .iter()
            .enumerate()
            .map(|(k, entry)| {
                let shape_ok = |m: &Vec<Vec<f64>>| {
                    m.len() == self.d_out && m.iter().all(|row| row.len() == self.d_in)
                };
                if !shape_ok(&entry.re) || !entry.im.as_ref().is_none_or(shape_ok) {
                    return Err(Error::Config(format!(
                        "Kraus operator {k} must be {}x{}",
                        self.d_out, self.d_in
                    )));
                }
                let data = (0..self.d_out)
                    .flat_map(|i| (0..self.d_in).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        let im = entry.im.as_ref().map_or(0.0, |m| m[i][j]);
                        Complex::new(entry.re[i][j], im)
                    })
                    .collect();
                ComplexMatrix::from_vec(self.d_out, self.d_in, data)
                    .map_err(|e| Error::Config(format!("Kraus operator {k}: {e}")))
            })
            .collect()
    }

    pub fn into_channel(self) -> Result<Channel> {
        let kraus = self.matrices()?;
        let label = self.label.clone().unwrap_or_else(|| "custom".into());
        Channel::with_tolerance(self.d_in, self.d_out, kraus, label, DOCUMENT_COMPLETENESS_TOL)
    }
}

/// Parses and validates a channel document.
pub fn load_channel(json: &str) -> Result<Channel> {
    parse_document(json)?.into_channel()
}

pub fn parse_document(json: &str) -> Result<ChannelDocument> {
    serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))
}

pub fn load_channel_file(path: impl AsRef<Path>) -> Result<Channel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    load_channel(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn maximally_mixed(d: usize) -> ComplexMatrix {
        ComplexMatrix::identity(d).scale_real(1.0 / d as f64)
    }

    fn bell(kind: usize) -> Vec<Complex> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = match kind {
            0 => [h, 0.0, 0.0, h],
            1 => [h, 0.0, 0.0, -h],
            2 => [0.0, h, h, 0.0],
            _ => [0.0, h, -h, 0.0],
        };
        v.iter().map(|&x| Complex::new(x, 0.0)).collect()
    }

    fn zoo() -> Vec<Channel> {
        vec![
            Channel::identity(3),
            make_dephasing(0.3, 2, None).unwrap(),
            make_dephasing(0.7, 4, None).unwrap(),
            make_depolarizing(0.2, 2).unwrap(),
            make_depolarizing(0.5, 3).unwrap(),
            make_pauli([0.4, 0.3, 0.2, 0.1]).unwrap(),
            make_erasure(0.35, 3).unwrap(),
            make_amplitude_damping(0.45).unwrap(),
            make_two_kraus(0.3, 1.1).unwrap(),
        ]
    }

    #[test]
    fn zoo_is_trace_preserving() {
        for ch in zoo() {
            assert!(ch.completeness_residual() < 1e-12, "{}", ch.label());
        }
    }

    #[test]
    fn choi_reduces_to_channel_output() {
        for ch in zoo() {
            let d = ch.d_in();
            let reduced = ch
                .choi_output()
                .partial_trace((d, ch.d_out()), linalg::Subsystem::B)
                .unwrap();
            let direct = ch.apply(&maximally_mixed(d)).unwrap();
            assert!(reduced.max_abs_diff(&direct) < 1e-12, "{}", ch.label());
        }
    }

    #[test]
    fn identity_and_unital_fixed_points() {
        let rho = ComplexMatrix::from_vec(
            2,
            2,
            vec![Complex::new(0.7, 0.0), Complex::new(0.1, 0.2), Complex::new(0.1, -0.2), Complex::new(0.3, 0.0)],
        )
        .unwrap();
        assert!(Channel::identity(2).apply(&rho).unwrap().max_abs_diff(&rho) < 1e-15);
        let dep = make_depolarizing(0.37, 2).unwrap();
        assert!(dep.apply(&maximally_mixed(2)).unwrap().max_abs_diff(&maximally_mixed(2)) < 1e-15);
    }

    #[test]
    fn amplitude_damping_on_maximally_mixed() {
        let gamma = 0.2;
        let out = make_amplitude_damping(gamma).unwrap().apply(&maximally_mixed(2)).unwrap();
        let expected = ComplexMatrix::diag(&[(1.0 + gamma) / 2.0, (1.0 - gamma) / 2.0]);
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn apply_rejects_bad_inputs() {
        let ch = make_amplitude_damping(0.1).unwrap();
        assert!(ch.apply(&maximally_mixed(3)).is_err());
        assert!(ch.apply(&ComplexMatrix::identity(2)).is_err());
        let non_herm = ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.0, 0.5]);
        assert!(matches!(ch.apply(&non_herm), Err(Error::NotDensity(_))));
    }

    #[test]
    fn choi_of_identity_is_bell_projector() {
        let choi = Channel::identity(2).choi_output();
        assert!(choi.max_abs_diff(&ComplexMatrix::projector(&bell(0))) < 1e-15);
    }

    #[test]
    fn choi_of_qubit_dephasing_is_bell_diagonal() {
        // (I⊗σz)|Φ+⟩ = |Φ-⟩, so the Choi state is (1-p/2)Φ+ + (p/2)Φ-
        let p = 0.3;
        let choi = make_dephasing(p, 2, None).unwrap().choi_output();
        let expected = &ComplexMatrix::projector(&bell(0)).scale_real(1.0 - p / 2.0)
            + &ComplexMatrix::projector(&bell(1)).scale_real(p / 2.0);
        assert!(choi.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn dephasing_edge_cases() {
        let ch = make_dephasing(0.0, 2, None).unwrap();
        assert!(ch.choi_output().max_abs_diff(&Channel::identity(2).choi_output()) < 1e-15);
        let ch = make_dephasing(1.0, 2, None).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(ch.kraus()[0].max_abs_diff(&ComplexMatrix::identity(2).scale_real(h)) < 1e-15);
        assert!(ch.kraus()[1].max_abs_diff(&linalg::paulis()[3].scale_real(h)) < 1e-15);
        let eig = make_dephasing(0.5, 2, None).unwrap().choi_output().hermitian_eig().unwrap();
        for (got, want) in eig.eigenvalues.iter().zip([0.75, 0.25, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_rejects_bad_unitaries() {
        let id = ComplexMatrix::identity(2);
        assert!(matches!(make_dephasing(0.5, 2, Some(&id)), Err(Error::NotTraceless(_))));
        let not_unitary = ComplexMatrix::from_real(2, 2, &[0.0, 2.0, 1.0, 0.0]);
        assert!(matches!(make_dephasing(0.5, 2, Some(&not_unitary)), Err(Error::NotUnitary(_))));
        assert!(make_dephasing(1.5, 2, None).is_err());
        assert!(make_dephasing(0.5, 3, Some(&weyl(1, 1, 3))).is_ok());
    }

    #[test]
    fn weyl_operators_are_orthogonal() {
        for d in 2..=5 {
            let ops = weyl_operators(d);
            for (i, a) in ops.iter().enumerate() {
                assert!(a.unitarity_defect() < 1e-12);
                for (j, b) in ops.iter().enumerate() {
                    let tr = a.dagger().matmul(b).unwrap().trace().unwrap();
                    let expected = if i == j { d as f64 } else { 0.0 };
                    assert!((tr - Complex::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn qubit_weyl_operators_are_paulis() {
        let [id, sx, _, sz] = linalg::paulis();
        assert_eq!(weyl(0, 0, 2), id);
        assert!(weyl(0, 1, 2).max_abs_diff(&sx) < 1e-15);
        assert!(weyl(1, 0, 2).max_abs_diff(&sz) < 1e-15);
    }

    #[test]
    fn depolarizing_edge_cases() {
        for d in 2..=4 {
            let ch = make_depolarizing(0.0, d).unwrap();
            assert!(ch.choi_output().max_abs_diff(&Channel::identity(d).choi_output()) < 1e-12);
        }
        let full = make_depolarizing(0.75, 2).unwrap().choi_output();
        assert!(full.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-12);
        assert!(make_depolarizing(1.2, 2).is_err());
        assert!(make_depolarizing(-0.1, 3).is_err());
    }

    #[test]
    fn depolarizing_matches_closed_form_map() {
        // (1 - p d²/(d²-1)) ρ + p d²/(d²-1) I/d on a random state
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..=4 {
            let u = linalg::random_unitary(d, &mut rng);
            let weights: Vec<f64> = (1..=d).map(|k| k as f64).collect();
            let total: f64 = weights.iter().sum();
            let diag: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let rho = &(&u * &ComplexMatrix::diag(&diag)) * &u.dagger();
            let p = 0.4;
            let f = p * (d * d) as f64 / (d * d - 1) as f64;
            let expected = &rho.scale_real(1.0 - f) + &maximally_mixed(d).scale_real(f);
            let got = make_depolarizing(p, d).unwrap().apply(&rho).unwrap();
            assert!(got.max_abs_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn depolarizing_equals_pauli_form() {
        let p = 0.27;
        let a = make_depolarizing(p, 2).unwrap().choi_output();
        let b = make_pauli([1.0 - p, p / 3.0, p / 3.0, p / 3.0]).unwrap().choi_output();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn pauli_edge_cases() {
        let id = make_pauli([1.0, 0.0, 0.0, 0.0]).unwrap().choi_output();
        assert!(id.max_abs_diff(&Channel::identity(2).choi_output()) < 1e-15);
        let full = make_pauli([0.25; 4]).unwrap().choi_output();
        assert!(full.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-12);
        assert!(make_pauli([0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(make_pauli([0.5, 0.2, 0.2, 0.2]).is_err());
        assert!(make_generalized_pauli(&[0.5, 0.5], 2).is_err());
    }

    #[test]
    fn uniform_weyl_mixture_is_completely_depolarizing() {
        let ch = make_generalized_pauli(&[1.0 / 9.0; 9], 3).unwrap();
        assert!(ch.choi_output().max_abs_diff(&ComplexMatrix::identity(9).scale_real(1.0 / 9.0)) < 1e-12);
    }

    #[test]
    fn erasure_structure() {
        let ch = make_erasure(0.0, 2).unwrap();
        assert_eq!((ch.d_in(), ch.d_out()), (2, 3));
        let rho = maximally_mixed(2);
        let out = ch.apply(&rho).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.5, 0.0])) < 1e-15);

        let lost = make_erasure(1.0, 2).unwrap().apply(&rho).unwrap();
        assert!(lost.max_abs_diff(&ComplexMatrix::diag(&[0.0, 0.0, 1.0])) < 1e-15);

        let eig = make_erasure(0.25, 2).unwrap().choi_output().hermitian_eig().unwrap();
        let expected = [0.75, 0.125, 0.125, 0.0, 0.0, 0.0];
        for (got, want) in eig.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_damping_edge_cases() {
        let id = make_amplitude_damping(0.0).unwrap().choi_output();
        assert!(id.max_abs_diff(&Channel::identity(2).choi_output()) < 1e-15);
        let rho = ComplexMatrix::diag(&[0.2, 0.8]);
        let out = make_amplitude_damping(1.0).unwrap().apply(&rho).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-15);
        assert!(make_amplitude_damping(1.01).is_err());
    }

    #[test]
    fn amplitude_damping_joint_output_four_term_form() {
        let gamma: f64 = 0.2;
        let s = (1.0 - gamma).sqrt();
        let proj = |u: &[Complex], v: &[Complex]| ComplexMatrix::outer(u, v);
        let (pp, pm, sp, sm) = (bell(0), bell(1), bell(2), bell(3));
        let mut expected = proj(&pp, &pp).scale_real((1.0 + s).powi(2) / 4.0);
        for (m, w) in [
            (proj(&pm, &pm), (1.0 - s).powi(2) / 4.0),
            (proj(&pp, &pm), gamma / 4.0),
            (proj(&pm, &pp), gamma / 4.0),
            (proj(&sp, &sp), gamma / 4.0),
            (proj(&sm, &sm), gamma / 4.0),
            (proj(&sp, &sm), -gamma / 4.0),
            (proj(&sm, &sp), -gamma / 4.0),
        ] {
            expected = &expected + &m.scale_real(w);
        }
        let choi = make_amplitude_damping(gamma).unwrap().choi_output();
        assert!(choi.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn two_kraus_special_cases() {
        let id = make_two_kraus(0.0, 0.0).unwrap().choi_output();
        assert!(id.max_abs_diff(&Channel::identity(2).choi_output()) < 1e-15);

        let alpha: f64 = 0.6;
        let tk = make_two_kraus(alpha, 0.0).unwrap().choi_output();
        let ad = make_amplitude_damping(alpha.sin().powi(2)).unwrap().choi_output();
        // amplitude damping conjugated by σx on input and output: same Choi spectrum
        let spectrum = |m: &ComplexMatrix| m.hermitian_eig().unwrap().eigenvalues;
        for (a, b) in spectrum(&tk).iter().zip(spectrum(&ad)) {
            assert!((a - b).abs() < 1e-12);
        }

        // α = β gives A1 = cos α I, A2 = sin α σx, a σx dephasing with p/2 = sin²α
        let deph = make_two_kraus(alpha, alpha).unwrap().choi_output();
        let p = 2.0 * alpha.sin().powi(2);
        let expected = make_dephasing(p, 2, Some(&linalg::paulis()[1])).unwrap().choi_output();
        assert!(deph.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn document_round_trip() {
        let ch = make_dephasing(0.4, 2, None).unwrap();
        let json = serde_json::to_string(&ch.to_document()).unwrap();
        let back = load_channel(&json).unwrap();
        assert!(back.choi_output().max_abs_diff(&ch.choi_output()) < 1e-15);

        let ad = make_amplitude_damping(0.3).unwrap();
        let back = load_channel(&serde_json::to_string(&ad.to_document()).unwrap()).unwrap();
        let rho = ComplexMatrix::from_vec(
            2,
            2,
            vec![Complex::new(0.6, 0.0), Complex::new(0.2, -0.1), Complex::new(0.2, 0.1), Complex::new(0.4, 0.0)],
        )
        .unwrap();
        assert!(back.apply(&rho).unwrap().max_abs_diff(&ad.apply(&rho).unwrap()) < 1e-12);
    }

    #[test]
    fn document_errors() {
        let not_cp = r#"{"d_in":2,"d_out":2,"kraus":[{"re":[[1,0],[0,1]]},{"re":[[0,1],[0,0]]}]}"#;
        assert!(matches!(load_channel(not_cp), Err(Error::Completeness(_))));
        let bad_shape = r#"{"d_in":2,"d_out":2,"kraus":[{"re":[[1,0,0],[0,1,0]]}]}"#;
        assert!(matches!(load_channel(bad_shape), Err(Error::Config(_))));
        assert!(matches!(load_channel("{not json"), Err(Error::Config(_))));
        let imag = r#"{"d_in":1,"d_out":1,"kraus":[{"re":[[0]],"im":[[1]]}]}"#;
        assert!(load_channel(imag).is_ok());
    }

    #[test]
    fn purification_reproduces_state() {
        let rho = ComplexMatrix::from_vec(
            2,
            2,
            vec![Complex::new(0.6, 0.0), Complex::new(0.2, -0.1), Complex::new(0.2, 0.1), Complex::new(0.4, 0.0)],
        )
        .unwrap();
        let psi = purification(&rho).unwrap();
        let reduced = ComplexMatrix::projector(&psi)
            .partial_trace((2, 2), linalg::Subsystem::B)
            .unwrap();
        assert!(reduced.max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn random_channels_are_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for rank in 1..=4 {
            let ch = random_channel(3, rank, &mut rng);
            assert_eq!(ch.kraus().len(), rank);
            assert!(ch.completeness_residual() < 1e-12);
        }
    }
}
