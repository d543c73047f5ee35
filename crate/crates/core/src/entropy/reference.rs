//! Closed-form capacities and bounds for the standard channels, used as
//! ground truth for the detected bounds.

use serde::Serialize;

use super::{entropy_terms, h2};
use crate::error::{Error, Result};
use crate::scalar::bracketed_max;

/// Coarse intervals scanned before the golden-section refinement of `max_q`.
const SCAN_INTERVALS: usize = 64;
const MAX_TOL: f64 = 1e-10;

/// A reference value, tagged by what is actually known about it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ReferenceValue {
    /// The quantum capacity itself.
    Exact(f64),
    /// Only a lower bound on the capacity.
    LowerBound(f64),
}

impl ReferenceValue {
    pub fn value(self) -> f64 {
        match self {
            Self::Exact(v) | Self::LowerBound(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Self::Exact(_))
    }
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter {
            name: name.into(),
            value: v,
            reason: "must lie in [0, 1]".into(),
        });
    }
    Ok(())
}

/// `log2 d - H2(p/2)`. The capacity for `d = 2`; only a lower bound above.
pub fn capacity_dephasing(p: f64, d: usize) -> Result<ReferenceValue> {
    unit_interval("p", p)?;
    let value = (d as f64).log2() - h2(p / 2.0);
    Ok(if d == 2 {
        ReferenceValue::Exact(value)
    } else {
        ReferenceValue::LowerBound(value)
    })
}

/// Hashing bound for the depolarizing channel,
/// `log2 d - H2(p) - p log2(d² - 1)`.
pub fn hashing_bound(p: f64, d: usize) -> Result<f64> {
    unit_interval("p", p)?;
    let d = d as f64;
    Ok(d.log2() - h2(p) - p * (d * d - 1.0).log2())
}

/// `1 - 4p`, the known upper bound on the qubit depolarizing capacity.
/// Negative values mean `Q = 0`.
pub fn depolarizing_upper(p: f64) -> f64 {
    1.0 - 4.0 * p
}

/// Hashing bound `log2 d - H(p)` for a (generalised) Pauli channel.
pub fn pauli_hashing_bound(weights: &[f64], d: usize) -> f64 {
    (d as f64).log2() - entropy_terms(weights)
}

/// Erasure capacity `(1 - 2p) log2 d`, zero for `p >= 1/2`.
pub fn capacity_erasure(p: f64, d: usize) -> Result<f64> {
    unit_interval("p", p)?;
    Ok(((1.0 - 2.0 * p) * (d as f64).log2()).max(0.0))
}

/// `max_q H2((1-γ)q) - H2(γq)`, zero for `γ >= 1/2`.
pub fn capacity_amplitude_damping(gamma: f64) -> Result<f64> {
    unit_interval("gamma", gamma)?;
    if gamma >= 0.5 {
        return Ok(0.0);
    }
    let (_, q) = bracketed_max(
        |q| h2((1.0 - gamma) * q) - h2(gamma * q),
        0.0,
        1.0,
        SCAN_INTERVALS,
        MAX_TOL,
    );
    Ok(q.max(0.0))
}

/// Whether the two-Kraus channel `(α, β)` is degradable, i.e.
/// `cos 2α / cos 2β > 0`. Otherwise it is antidegradable.
pub fn two_kraus_degradable(alpha: f64, beta: f64) -> bool {
    (2.0 * alpha).cos() * (2.0 * beta).cos() > 0.0
}

/// Quantum capacity of the two-Kraus channel:
/// `max_p H2(p cos²α + (1-p) sin²β) - H2(p sin²α + (1-p) sin²β)` in the
/// degradable region, zero elsewhere.
pub fn capacity_two_kraus(alpha: f64, beta: f64) -> f64 {
    if !two_kraus_degradable(alpha, beta) {
        return 0.0;
    }
    let (ca, sa, sb) = (alpha.cos().powi(2), alpha.sin().powi(2), beta.sin().powi(2));
    let (_, q) = bracketed_max(
        |p| h2(p * ca + (1.0 - p) * sb) - h2(p * sa + (1.0 - p) * sb),
        0.0,
        1.0,
        SCAN_INTERVALS,
        MAX_TOL,
    );
    q.max(0.0)
}
