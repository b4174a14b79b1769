use thiserror::Error;

/// Errors raised by the linear algebra, state and steering layers.
///
/// Residuals are carried as `f64` regardless of the scalar type so that
/// diagnostics read the same in every precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("vectors are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("outcome `{label}` has probability {probability:.3e}; cannot renormalize")]
    DegenerateOutcome { label: String, probability: f64 },

    #[error("Schmidt Gram check failed (residual {residual:.3e})")]
    AgreeViolation { residual: f64 },

    #[error("Bob's space has dimension {available}, need at least {needed}")]
    BobTooSmall { needed: usize, available: usize },

    #[error("reduced densities differ (residual {residual:.3e})")]
    MarginalMismatch { residual: f64 },

    #[error("ensemble does not decompose the density matrix (residual {residual:.3e})")]
    NotADecomposition { residual: f64 },

    #[error("residual outcome sampled; steering plan does not match its purification")]
    ResidualOutcome,

    #[error("configuration conflict: {0}")]
    ConfigConflict(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
