//! Detectable lower bounds on quantum channel capacities.
//!
//! A channel `E` acts on one half of a maximally entangled pair. Measuring the
//! joint output in an entangled orthonormal basis gives a probability vector
//! `p`, and `Q_DET = S(E(I/d)) - H(p)` lower-bounds the coherent information,
//! hence the quantum capacity `Q`, the private capacity `P`, and (shifted by
//! `log2 d`) the entanglement-assisted capacity `C_E`.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex matrices, partial traces, Hermitian Jacobi eigensolver.
//! - [`channels`]: Kraus-set channels, the standard channel zoo, JSON ingestion.
//! - [`entropy`]: Shannon / von Neumann entropies, coherent information and the
//!   closed-form reference capacities.
//! - [`detection`]: measurement bases, probability vectors, basis optimisation, sweeps.
//! - [`shotsim`]: finite-shot simulation of the `XX`, `YY`, `ZZ` settings and the
//!   estimator built on them.
//! - [`scalar`]: golden-section search.

#![forbid(unsafe_code)]

pub mod channels;
pub mod detection;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod shotsim;

pub use channels::Channel;
pub use detection::{BasisFamily, BasisSpec, BoundReport};
pub use entropy::ProbabilityVector;
pub use error::{Error, Result};
pub use linalg::{Complex, ComplexMatrix, Spectrum};
