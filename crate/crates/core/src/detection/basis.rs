//! Orthonormal measurement bases on the reference ⊗ system space.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channels::{max_entangled, weyl};
use crate::error::{Error, Result};
use crate::linalg::{inner, Complex, ComplexMatrix, I, ZERO};

/// Orthonormality / completeness tolerance for user-supplied bases.
pub const BASIS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BasisFamily {
    /// `{aΦ+ + bΦ-, -bΦ+ + aΦ-, cΨ+ + dΨ-, -dΨ+ + cΨ-}`
    B1,
    /// `{aΦ+ + bΨ+, -bΦ+ + aΨ+, cΦ- + dΨ-, -dΦ- + cΨ-}`
    B2,
    /// `{aΦ+ + ibΨ-, ibΦ+ + aΨ-, cΦ- + idΨ+, idΦ- + cΨ+}`
    B3,
    /// `(I ⊗ U_mn)|Ψ⟩` over all Weyl operators.
    GeneralizedBell,
    /// Generalised Bell vectors inside `R ⊗ C^d` plus the flags `|i⟩ ⊗ |e⟩`.
    ErasureFlag,
    Custom,
}

impl BasisFamily {
    pub const QUBIT: [BasisFamily; 3] = [BasisFamily::B1, BasisFamily::B2, BasisFamily::B3];

    pub fn is_qubit_family(self) -> bool {
        matches!(self, Self::B1 | Self::B2 | Self::B3)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::B1 => "B1",
            Self::B2 => "B2",
            Self::B3 => "B3",
            Self::GeneralizedBell => "GENERALIZED_BELL",
            Self::ErasureFlag => "ERASURE_FLAG",
            Self::Custom => "CUSTOM",
        }
    }
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Identifies a measurement basis. For the qubit families the coefficients
/// are `a = cos θ1, b = sin θ1, c = cos θ2, d = sin θ2`, so `a² + b² = c² + d² = 1`
/// by construction. `dim` is the dimension of each subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BasisSpec {
    pub family: BasisFamily,
    pub theta1: f64,
    pub theta2: f64,
    pub dim: usize,
}

impl BasisSpec {
    pub fn qubit(family: BasisFamily, theta1: f64, theta2: f64) -> Self {
        Self {
            family,
            theta1,
            theta2,
            dim: 2,
        }
    }

    /// The Bell basis `{Φ+, Φ-, Ψ+, Ψ-}`, i.e. `B1` at `θ1 = θ2 = 0`.
    pub fn bell() -> Self {
        Self::qubit(BasisFamily::B1, 0.0, 0.0)
    }

    pub fn generalized_bell(d: usize) -> Self {
        Self {
            family: BasisFamily::GeneralizedBell,
            theta1: 0.0,
            theta2: 0.0,
            dim: d,
        }
    }

    /// Flag-augmented basis for an erasure channel with `d`-level input.
    pub fn erasure_flag(d: usize) -> Self {
        Self {
            family: BasisFamily::ErasureFlag,
            theta1: 0.0,
            theta2: 0.0,
            dim: d,
        }
    }

    /// `(a, b, c, d)`
    pub fn coefficients(&self) -> (f64, f64, f64, f64) {
        let (b, a) = self.theta1.sin_cos();
        let (d, c) = self.theta2.sin_cos();
        (a, b, c, d)
    }
}

fn real(v: [f64; 4]) -> Vec<Complex> {
    v.iter().map(|&x| Complex::new(x, 0.0)).collect()
}

/// `[Φ+, Φ-, Ψ+, Ψ-]` in the `|00⟩, |01⟩, |10⟩, |11⟩` ordering.
pub fn bell_states() -> [Vec<Complex>; 4] {
    let h = FRAC_1_SQRT_2;
    [
        real([h, 0.0, 0.0, h]),
        real([h, 0.0, 0.0, -h]),
        real([0.0, h, h, 0.0]),
        real([0.0, h, -h, 0.0]),
    ]
}

fn combine(x: Complex, u: &[Complex], y: Complex, v: &[Complex]) -> Vec<Complex> {
    u.iter().zip(v).map(|(&p, &q)| x * p + y * q).collect()
}

/// The four vectors of a qubit family, ordered as written in the family's
/// definition (first sector pair, then second sector pair).
pub(crate) fn qubit_family_vectors(family: BasisFamily, theta1: f64, theta2: f64) -> [Vec<Complex>; 4] {
    let [phi_p, phi_m, psi_p, psi_m] = bell_states();
    let (a, b, c, d) = BasisSpec::qubit(family, theta1, theta2).coefficients();
    let r = |x: f64| Complex::new(x, 0.0);
    let im = |x: f64| I * x;
    match family {
        BasisFamily::B1 => [
            combine(r(a), &phi_p, r(b), &phi_m),
            combine(r(-b), &phi_p, r(a), &phi_m),
            combine(r(c), &psi_p, r(d), &psi_m),
            combine(r(-d), &psi_p, r(c), &psi_m),
        ],
        BasisFamily::B2 => [
            combine(r(a), &phi_p, r(b), &psi_p),
            combine(r(-b), &phi_p, r(a), &psi_p),
            combine(r(c), &phi_m, r(d), &psi_m),
            combine(r(-d), &phi_m, r(c), &psi_m),
        ],
        BasisFamily::B3 => [
            combine(r(a), &phi_p, im(b), &psi_m),
            combine(im(b), &phi_p, r(a), &psi_m),
            combine(r(c), &phi_m, im(d), &psi_p),
            combine(im(d), &phi_m, r(c), &psi_p),
        ],
        _ => unreachable!("not a qubit family"),
    }
}

/// `(I ⊗ U_mn)|Ψ⟩`, ordered by `m * d + n`.
pub fn generalized_bell_vectors(d: usize) -> Vec<Vec<Complex>> {
    let psi = max_entangled(d);
    let mut out = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let u = weyl(m, n, d);
            let mut v = vec![ZERO; d * d];
            for r in 0..d {
                for s in 0..d {
                    v[r * d + s] = (0..d).map(|k| u[(s, k)] * psi[r * d + k]).sum();
                }
            }
            out.push(v);
        }
    }
    out
}

fn erasure_flag_vectors(d: usize) -> Vec<Vec<Complex>> {
    let d_out = d + 1;
    let mut out: Vec<Vec<Complex>> = generalized_bell_vectors(d)
        .into_iter()
        .map(|v| {
            let mut w = vec![ZERO; d * d_out];
            for r in 0..d {
                for s in 0..d {
                    w[r * d_out + s] = v[r * d + s];
                }
            }
            w
        })
        .collect();
    for i in 0..d {
        let mut w = vec![ZERO; d * d_out];
        w[i * d_out + d] = Complex::new(1.0, 0.0);
        out.push(w);
    }
    out
}

/// A complete orthonormal basis together with the spec it came from.
#[derive(Clone, Debug)]
pub struct Basis {
    spec: BasisSpec,
    vectors: Vec<Vec<Complex>>,
}

impl Basis {
    pub fn build(spec: &BasisSpec) -> Result<Self> {
        let vectors = match spec.family {
            f if f.is_qubit_family() => {
                if spec.dim != 2 {
                    return Err(Error::UnsupportedBasis(format!(
                        "{f} is a two-qubit basis, got dim={}",
                        spec.dim
                    )));
                }
                qubit_family_vectors(f, spec.theta1, spec.theta2).to_vec()
            }
            BasisFamily::GeneralizedBell if spec.dim >= 2 => generalized_bell_vectors(spec.dim),
            BasisFamily::ErasureFlag if spec.dim >= 2 => erasure_flag_vectors(spec.dim),
            BasisFamily::Custom => {
                return Err(Error::UnsupportedBasis(
                    "custom bases are built from explicit vectors".into(),
                ))
            }
            f => {
                return Err(Error::UnsupportedBasis(format!("{f} with dim={}", spec.dim)));
            }
        };
        Ok(Self {
            spec: *spec,
            vectors,
        })
    }

    /// Wraps explicit vectors after checking they form an orthonormal basis.
    pub fn custom(vectors: Vec<Vec<Complex>>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(
                "a custom basis needs n vectors of length n".into(),
            ));
        }
        let basis = Self {
            spec: BasisSpec {
                family: BasisFamily::Custom,
                theta1: 0.0,
                theta2: 0.0,
                dim: n,
            },
            vectors,
        };
        let defect = basis.orthonormality_defect();
        if defect > BASIS_TOL {
            return Err(Error::NotOrthonormal(defect));
        }
        Ok(basis)
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn vectors(&self) -> &[Vec<Complex>] {
        &self.vectors
    }

    /// Length of each vector, i.e. the composite dimension.
    pub fn space_dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.vectors.iter().map(|v| ComplexMatrix::projector(v)).collect()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(u, v) - Complex::new(target, 0.0)).norm());
            }
        }
        worst
    }
}
