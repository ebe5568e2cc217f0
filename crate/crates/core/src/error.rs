use thiserror::Error;

use crate::numerics::SchurResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Shifted QR ran out of iterations; the partial iterate is kept for inspection.
    #[error("QR iteration did not converge after {iterations} iterations ({unconverged} eigenvalues left)")]
    NoConvergence {
        iterations: usize,
        unconverged: usize,
        partial: Box<SchurResult>,
    },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPsd { eigenvalue: f64 },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("zero polynomial has no roots")]
    ZeroPolynomial,

    #[error("|p| = {modulus} is within tolerance of the unit circle; use the distinguished-boundary test")]
    BoundaryRegime { modulus: f64 },

    #[error("tuple does not commute: worst commutator norm {worst:e} exceeds {threshold:e}")]
    NonCommuting { worst: f64, threshold: f64 },

    #[error("order {order} exceeds the oracle limit {limit}")]
    OrderGuard { order: usize, limit: usize },

    #[error("joint triangularization failed: worst off-triangular residual {worst_residual:e}")]
    JointSpectrum { worst_residual: f64 },

    #[error(
        "isometry-defect inconsistency: D_P vanishes but S_i - S_(n-i)^* P has norm {rhs_norm:e}"
    )]
    IsometryDefectInconsistency { rhs_norm: f64 },

    #[error("omega must be unimodular, |omega| = {modulus}")]
    NonUnimodular { modulus: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input that does not parse; `path` locates the offending field.
    #[error("{origin}: malformed input at `{path}`: {message}")]
    Input {
        origin: String,
        path: String,
        message: String,
    },

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical kernel rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::JointSpectrum { .. }
                | Error::IsometryDefectInconsistency { .. }
        )
    }
}
