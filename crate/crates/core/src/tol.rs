//! Centralized numeric tolerances.
//!
//! Every threshold used for validation or certification is named here so that
//! the same constant governs construction, checking, and tests.

/// Relative tolerance for metric-axiom validation (symmetry, triangle
/// inequality). Distance matrices assembled from f64 norms accumulate a few
/// ulps of rounding; 1e-9 leaves six orders of headroom.
pub const METRIC_REL_TOL: f64 = 1e-9;

/// Below this pairwise distance two points are treated as coincident.
pub const DISTINCT_TOL: f64 = 1e-12;

/// A norm value at or below this is treated as zero (definiteness checks).
pub const NORM_ZERO_TOL: f64 = 1e-12;

/// Certificate soundness: a witness must re-evaluate to its reported value
/// within this tolerance, and packing witnesses must be 1-separated up to it.
pub const CERT_TOL: f64 = 1e-9;

/// Default relative-spread threshold for declaring a configuration
/// equilateral: (max - min) / max pairwise distance.
pub const EQUILATERAL_TOL: f64 = 1e-9;

/// Slack added to the ball radius in the constructive packing check
/// (the rebuilt 1-separated set must fit in a ball of radius c + 1 + this).
pub const BALL_SLACK: f64 = 1e-6;

/// Penalty weight for separation violations in the packing search.
pub const SEPARATION_PENALTY: f64 = 1e3;
