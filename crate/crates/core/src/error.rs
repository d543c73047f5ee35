use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigenvalue {0:e} is below the clamp threshold; state is not positive semidefinite")]
    NegativeEigenvalue(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("parameter `{name}` = {value} is outside its domain: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: String,
    },

    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("operator is not traceless (|Tr U| = {0:e})")]
    NotTraceless(f64),

    #[error("Kraus set is not trace preserving (residual {0:e})")]
    Completeness(f64),

    #[error("input is not a density matrix: {0}")]
    NotDensity(String),

    #[error("malformed channel document: {0}")]
    Config(String),

    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),

    #[error("basis is not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("operation requires a qubit channel, got d_in={d_in}, d_out={d_out}")]
    NotQubit { d_in: usize, d_out: usize },

    #[error("missing measurement setting {0}")]
    MissingSetting(&'static str),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
