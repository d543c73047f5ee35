//! Minimisation of `H(p)` over the qubit families `B1`, `B2`, `B3`.
//!
//! Within a family the four projectors split into two sectors: the first two
//! depend only on `θ1`, the last two only on `θ2`. Shannon entropy is a sum
//! over entries, so `H(θ1, θ2) = h1(θ1) + h2(θ2)` and the `64 x 64` grid over
//! `[0, π)²` decomposes into two 64-point scans; each is then refined by
//! golden-section search around the best grid point.

use std::f64::consts::{FRAC_PI_2, PI};

use super::basis::{qubit_family_vectors, BasisFamily, BasisSpec};
use super::{output_entropy, BoundReport};
use crate::channels::Channel;
use crate::entropy::{entropy_terms, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::expectation;
use crate::scalar::golden_section_min;

/// Grid points per angle on `[0, π)`.
pub const GRID_POINTS: usize = 64;
/// Bracket width at which the golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-10;
/// Families whose bounds agree to within this are tied; the lower index wins.
pub const TIE_TOL: f64 = 1e-12;
/// Golden-section search only resolves a quadratic minimum to ~1e-8 in the
/// angle, so an optimum at `0` can come back just under `π/2`.
const WRAP_TOL: f64 = 1e-6;

/// Best `Q_DET` over the three qubit families for a qubit channel.
pub fn optimize_qdet(ch: &Channel) -> Result<BoundReport> {
    if ch.d_in() != 2 || ch.d_out() != 2 {
        return Err(Error::NotQubit {
            d_in: ch.d_in(),
            d_out: ch.d_out(),
        });
    }
    let joint = ch.choi_output();
    let born = |spec: &BasisSpec| {
        let vectors = qubit_family_vectors(spec.family, spec.theta1, spec.theta2);
        let mut p = [0.0; 4];
        for (pi, v) in p.iter_mut().zip(vectors.iter()) {
            *pi = expectation(&joint, v).expect("4x4 state against 4-vectors");
        }
        p
    };
    optimize_with(output_entropy(ch)?, born)
}

/// Optimises over the qubit families given any source of probabilities for a
/// basis spec: the exact Born rule or an estimate from measured statistics.
pub fn optimize_with<F>(output_entropy: f64, probs: F) -> Result<BoundReport>
where
    F: Fn(&BasisSpec) -> [f64; 4],
{
    let mut best: Option<BoundReport> = None;
    for family in BasisFamily::QUBIT {
        let theta1 = best_sector_angle(|t| {
            entropy_terms(&probs(&BasisSpec::qubit(family, t, 0.0))[..2])
        });
        let theta2 = best_sector_angle(|t| {
            entropy_terms(&probs(&BasisSpec::qubit(family, 0.0, t))[2..])
        });
        let spec = BasisSpec::qubit(family, canonical_angle(theta1), canonical_angle(theta2));
        let (p, clamped) = ProbabilityVector::clamp_renormalize(&probs(&spec))?;
        let report = BoundReport::new(output_entropy, p, spec, 2, clamped);
        if best.as_ref().is_none_or(|b| report.q_det > b.q_det + TIE_TOL) {
            best = Some(report);
        }
    }
    Ok(best.expect("three families evaluated"))
}

fn best_sector_angle(f: impl Fn(f64) -> f64) -> f64 {
    let step = PI / GRID_POINTS as f64;
    let mut best = (0.0, f(0.0));
    for k in 1..GRID_POINTS {
        let t = step * k as f64;
        let v = f(t);
        if v < best.1 - TIE_TOL {
            best = (t, v);
        }
    }
    let (t, v) = golden_section_min(&f, best.0 - step, best.0 + step, REFINE_TOL);
    // flat sectors keep the grid point instead of wandering
    if v < best.1 - TIE_TOL {
        t
    } else {
        best.0
    }
}

/// `θ` and `θ + π/2` give the same projectors with the two vectors of the
/// sector swapped. Reports use the representative in `[0, π/2)`, with
/// values within [`WRAP_TOL`] of `π/2` wrapped to just below zero.
fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(FRAC_PI_2);
    if FRAC_PI_2 - t < WRAP_TOL {
        t - FRAC_PI_2
    } else {
        t
    }
}
