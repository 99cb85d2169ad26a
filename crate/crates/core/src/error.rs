//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by constructors and operations with preconditions.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix expected to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian within {tol}: residual {residual}")]
    NotHermitian { residual: f64, tol: f64 },

    /// A density operator failed validation (trace, positivity, norm).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An operation required a pure state but got a mixed one.
    #[error("state is not pure: det ρ = {det}")]
    NotPure { det: f64 },

    /// A Kraus pair is not linearly independent (channel length below two).
    #[error("Kraus pair is linearly dependent: not a length-two channel")]
    DependentKraus,

    /// A Kraus pair does not preserve the trace.
    #[error("Kraus pair is not trace-preserving: ‖A†A + B†B − 1‖ = {residual}")]
    NotTracePreserving { residual: f64 },

    /// A channel parameter lies outside its admissible range.
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    /// An ensemble failed validation (weights, size cap).
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    /// A mixer matrix is not an isometry within tolerance.
    #[error("mixer is not an isometry: residual {residual}")]
    NotIsometric { residual: f64 },

    /// A vector expected to be normalized is not.
    #[error("vector is not normalized: ‖v‖ = {norm}")]
    NotNormalized { norm: f64 },

    /// The alpha matrix of an anti-linear Hermitian operator must be symmetric.
    #[error("alpha matrix is not symmetric: residual {residual}")]
    NotSymmetric { residual: f64 },

    /// Input outside a function's numerical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation needed a canonical-form channel spec.
    #[error("channel spec is not in canonical form")]
    NotCanonical,

    /// A self-check on a returned result failed; indicates an internal bug
    /// or an input outside the theory's assumptions.
    #[error("result verification failed: {0}")]
    VerificationFailed(String),
}
