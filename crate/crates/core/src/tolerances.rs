//! Numerical thresholds used by the validators and solvers.
//!
//! Exact statements (vertex sets, supports, stabilizer membership, polytope
//! equality) carry no tolerance at all; the constants here only govern the
//! floating-point side.

/// Cocycle residual bound. The identity is exact in real arithmetic; the
/// residual is pure rounding of three log-sum-exp evaluations.
pub const COCYCLE_TOL: f64 = 1e-9;

/// Step for the central difference matching the gradient against the
/// directional derivative of the Kempf-Ness function.
pub const GRADIENT_FD_STEP: f64 = 1e-5;

/// Relative bound for that gradient match: truncation is O(step^2) and
/// cancellation O(eps/step), both far below this at the chosen step.
pub const GRADIENT_FD_REL_TOL: f64 = 1e-6;

/// Second derivatives along one-parameter subgroups are weight covariances,
/// evaluated as sums of squares; they vanish below this exactly on the
/// stabilizer and exceed it off the stabilizer at desk scale.
pub const SECOND_DERIVATIVE_VANISH_TOL: f64 = 1e-10;

/// Lower bound (sign flipped) certifying positive semidefiniteness of the
/// covariance Hessian.
pub const PSD_EIGENVALUE_TOL: f64 = 1e-10;

/// Hessian entries must be symmetric to this.
pub const HESSIAN_SYMMETRY_TOL: f64 = 1e-12;

/// Step for second-order central differences validating the Hessian;
/// directions are normalized by the weight spread first.
pub const HESSIAN_FD_STEP: f64 = 1e-4;

/// Relative bound for the Hessian finite-difference match.
pub const HESSIAN_FD_REL_TOL: f64 = 1e-6;

/// Pairings of moment images with stabilizer directions are translation
/// invariant; the bound covers rounding only.
pub const TRANSLATION_TOL: f64 = 1e-10;

/// Default residual target for moment inversion, measured on the gradient.
pub const NEWTON_TOL: f64 = 1e-9;

/// Default Newton iteration cap.
pub const NEWTON_MAX_ITER: usize = 100;

/// Residual bound for Legendre round-trips through `invert_moment`.
pub const LEGENDRE_ROUND_TRIP_TOL: f64 = 1e-9;

/// How close the sampled flow must come to its exact limit value at the
/// end of the horizon (the horizon is scaled by the smallest spectral gap).
pub const FLOW_CONVERGENCE_TOL: f64 = 1e-9;

/// Slack for monotonicity of the moment pairing along its own flow; the
/// function is nondecreasing exactly, so this covers rounding.
pub const FLOW_MONOTONICITY_SLACK: f64 = 1e-12;

/// Bound for the support-function match between the Minkowski polytope and
/// the far-flow moment pairing of a measure.
pub const SUPPORT_FUNCTION_TOL: f64 = 1e-8;
