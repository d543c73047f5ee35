//! Two-qubit projectors of the qubit families written over Pauli strings.
//!
//! Each projector is a real combination of the ten strings that the local
//! settings `XX`, `YY`, `ZZ` give access to (`II`, `σσ` and the marginals
//! `σI`, `Iσ`), which is what lets the probability vector be estimated from
//! those three settings alone.

use super::basis::{BasisFamily, BasisSpec};
use crate::error::{Error, Result};
use crate::linalg::{paulis, ComplexMatrix};

pub const PAULI_I: usize = 0;
pub const PAULI_X: usize = 1;
pub const PAULI_Y: usize = 2;
pub const PAULI_Z: usize = 3;

/// Weights `w[r][s]` of `σ_r ⊗ σ_s`, reference factor first, with
/// `0..4 = I, X, Y, Z`.
pub type PauliWeights = [[f64; 4]; 4];

/// Whether a string can be read off one of the `XX`, `YY`, `ZZ` settings.
pub fn is_locally_measurable(r: usize, s: usize) -> bool {
    r == 0 || s == 0 || r == s
}

pub fn pauli_string(r: usize, s: usize) -> ComplexMatrix {
    let p = paulis();
    p[r].kron(&p[s])
}

/// `Σ w[r][s] σ_r ⊗ σ_s`
pub fn weights_to_matrix(w: &PauliWeights) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (r, row) in w.iter().enumerate() {
        for (s, &x) in row.iter().enumerate() {
            if x != 0.0 {
                m = &m + &pauli_string(r, s).scale_real(x);
            }
        }
    }
    m
}

/// Common form of the six projector formulas:
/// `¼(II ± DD) + ((x²-y²)/4)(OO ± O'O') ± (xy/2)(MI ± IM)`.
struct Shape {
    diag: usize,
    diag_sign: f64,
    off: (usize, usize),
    off_sign: f64,
    marginal: usize,
    marginal_sign: f64,
    marginal_scale: f64,
}

impl Shape {
    fn weights(&self, x: f64, y: f64) -> PauliWeights {
        let mut w = [[0.0; 4]; 4];
        w[PAULI_I][PAULI_I] = 0.25;
        w[self.diag][self.diag] = 0.25 * self.diag_sign;
        let c = (x * x - y * y) / 4.0;
        w[self.off.0][self.off.0] += c;
        w[self.off.1][self.off.1] += c * self.off_sign;
        let m = self.marginal_scale * x * y / 2.0;
        w[self.marginal][PAULI_I] += m;
        w[PAULI_I][self.marginal] += m * self.marginal_sign;
        w
    }
}

// Π{aΦ+ + bΦ-} = ¼(II + ZZ) + ((a²-b²)/4)(XX - YY) + (ab/2)(ZI + IZ)
const PHI_PHI: Shape = Shape {
    diag: PAULI_Z,
    diag_sign: 1.0,
    off: (PAULI_X, PAULI_Y),
    off_sign: -1.0,
    marginal: PAULI_Z,
    marginal_sign: 1.0,
    marginal_scale: 1.0,
};

// Π{cΨ+ + dΨ-} = ¼(II - ZZ) + ((c²-d²)/4)(XX + YY) + (cd/2)(ZI - IZ)
const PSI_PSI: Shape = Shape {
    diag: PAULI_Z,
    diag_sign: -1.0,
    off: (PAULI_X, PAULI_Y),
    off_sign: 1.0,
    marginal: PAULI_Z,
    marginal_sign: -1.0,
    marginal_scale: 1.0,
};

// Π{aΦ+ + bΨ+} = ¼(II + XX) + ((a²-b²)/4)(ZZ - YY) + (ab/2)(XI + IX)
const PHIP_PSIP: Shape = Shape {
    diag: PAULI_X,
    diag_sign: 1.0,
    off: (PAULI_Z, PAULI_Y),
    off_sign: -1.0,
    marginal: PAULI_X,
    marginal_sign: 1.0,
    marginal_scale: 1.0,
};

// Π{cΦ- + dΨ-} = ¼(II - XX) + ((c²-d²)/4)(ZZ + YY) - (cd/2)(XI - IX)
const PHIM_PSIM: Shape = Shape {
    diag: PAULI_X,
    diag_sign: -1.0,
    off: (PAULI_Z, PAULI_Y),
    off_sign: 1.0,
    marginal: PAULI_X,
    marginal_sign: -1.0,
    marginal_scale: -1.0,
};

// Π{aΦ+ + ibΨ-} = ¼(II - YY) + ((a²-b²)/4)(ZZ + XX) - (ab/2)(YI - IY)
const PHIP_IPSIM: Shape = Shape {
    diag: PAULI_Y,
    diag_sign: -1.0,
    off: (PAULI_Z, PAULI_X),
    off_sign: 1.0,
    marginal: PAULI_Y,
    marginal_sign: -1.0,
    marginal_scale: -1.0,
};

// Π{cΦ- + idΨ+} = ¼(II + YY) + ((c²-d²)/4)(ZZ - XX) + (cd/2)(YI + IY)
const PHIM_IPSIP: Shape = Shape {
    diag: PAULI_Y,
    diag_sign: 1.0,
    off: (PAULI_Z, PAULI_X),
    off_sign: -1.0,
    marginal: PAULI_Y,
    marginal_sign: 1.0,
    marginal_scale: 1.0,
};

/// Pauli weights of the four projectors of a qubit family, in the order of
/// [`super::basis::Basis::build`]. The second vector of each pair is the
/// first one at rotated coefficients, e.g. `-bΦ+ + aΦ-` is `(a, b) → (-b, a)`
/// and `ibΦ+ + aΨ-` is `(a, b) → (b, -a)` up to a global phase.
pub fn pauli_projector_decomposition(spec: &BasisSpec) -> Result<[PauliWeights; 4]> {
    let (a, b, c, d) = spec.coefficients();
    Ok(match spec.family {
        BasisFamily::B1 => [
            PHI_PHI.weights(a, b),
            PHI_PHI.weights(-b, a),
            PSI_PSI.weights(c, d),
            PSI_PSI.weights(-d, c),
        ],
        BasisFamily::B2 => [
            PHIP_PSIP.weights(a, b),
            PHIP_PSIP.weights(-b, a),
            PHIM_PSIM.weights(c, d),
            PHIM_PSIM.weights(-d, c),
        ],
        BasisFamily::B3 => [
            PHIP_IPSIM.weights(a, b),
            PHIP_IPSIM.weights(b, -a),
            PHIM_IPSIP.weights(c, d),
            PHIM_IPSIP.weights(d, -c),
        ],
        f => {
            return Err(Error::UnsupportedBasis(format!(
                "no Pauli decomposition for {f}"
            )))
        }
    })
}
