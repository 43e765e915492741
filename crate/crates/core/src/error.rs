//! Error type shared by all modules.

use thiserror::Error;

use crate::hull::Membership;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Two objects that must agree on the ambient dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation received an empty collection where a nonempty one is required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A numeric input was NaN or infinite.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// A rational literal could not be parsed.
    #[error("invalid rational literal {literal:?}: {reason}")]
    InvalidRational { literal: String, reason: &'static str },

    /// A projective point violated its construction invariants.
    #[error("invalid projective point: {0}")]
    InvalidPoint(String),

    /// A zero vector was passed where a nonzero direction is required.
    #[error("zero vector not allowed: {0}")]
    ZeroVector(&'static str),

    /// An index was outside the valid range.
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// A measure violated its construction invariants.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// A Minkowski sum term carried a nonpositive weight.
    #[error("minkowski weight must be positive, got {0}")]
    NonPositiveWeight(String),

    /// Moment inversion was asked for a target outside the open image.
    ///
    /// Boundary targets are unattainable at finite group elements: the
    /// image of the moment map along an orbit is open in its affine hull,
    /// so they are rejected up front rather than approximated.
    #[error("inversion target is not in the relative interior of the momentum polytope (classified {membership:?})")]
    TargetNotInterior { membership: Membership },

    /// Newton iteration did not reach the requested residual.
    #[error("no convergence after {iterations} iterations (residual {residual:e}, tol {tol:e})")]
    NoConvergence { iterations: usize, residual: f64, tol: f64 },

    /// The point's support misses the top level of the flow direction.
    #[error("support does not meet the top level of the selector; missing indices {indices:?}")]
    MissingTopLevel { indices: Vec<usize> },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
