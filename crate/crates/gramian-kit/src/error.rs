//! Error type shared by every module of the toolkit.

use thiserror::Error;

/// Errors produced by matrix routines, space operations, and the
/// projection-pair construction.
#[derive(Debug, Error)]
pub enum GramianError {
    /// Input data violates a basic validity requirement (non-finite
    /// entries, empty dimensions, malformed wire data).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Dimensions of the operands do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A matrix expected to be positive semidefinite has an eigenvalue
    /// below the tolerated floor.
    #[error("matrix is not positive semidefinite: lambda_min = {lambda_min:.6e}")]
    NotPositive { lambda_min: f64 },

    /// The binomial series for the inverse square root does not converge
    /// because ||A - I|| is too close to 1.
    #[error("inverse-square-root series diverges: ||A - I|| = {norm:.9} >= {limit:.9}")]
    SeriesDiverges { norm: f64, limit: f64 },

    /// The series term cap was reached before the truncation threshold.
    #[error("inverse-square-root series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    /// The two projections are too far apart: ||P - Q|| must be
    /// strictly below 1 for the construction to apply.
    #[error("construction hypothesis violated: ||P - Q|| = {gap:.12} is not < 1")]
    HypothesisViolated { gap: f64 },

    /// An operator claimed to be a gramian selfadjoint projection fails
    /// the selfadjointness or idempotency check.
    #[error("not a gramian projection ({which}): selfadjoint residual {selfadjoint:.3e}, idempotent residual {idempotent:.3e}")]
    InvalidProjection {
        which: &'static str,
        selfadjoint: f64,
        idempotent: f64,
    },

    /// An operation requiring a partial isometry was given something else.
    #[error("not a partial gramian isometry: worst condition residual {residual:.3e}")]
    NotPartialIsometry { residual: f64 },

    /// A sample specification cannot be realized in the given space.
    #[error("infeasible sample spec: {0}")]
    InfeasibleSpec(String),

    /// A numerical invariant that should hold by construction failed.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, GramianError>;
