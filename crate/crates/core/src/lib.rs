//! Desk-scale machinery for comparing small metric spaces and normed-space
//! models: exact Gromov-Hausdorff distance between finite metric spaces,
//! minimal-distortion embeddings, equilateral-set search, certified
//! estimates of the metric imbalance c_m and the packing radius R_m, and GH
//! lower-bound certificates that grow without bound between mismatched
//! models.
//!
//! All types are immutable after construction and safe to share across
//! threads; multistart searches are deterministic for a fixed seed,
//! independent of thread count.

pub mod bounds;
pub mod equilateral;
pub mod error;
pub mod gh;
pub mod imbalance;
pub mod metric;
pub mod norm;
pub mod relation;
pub mod search;
pub mod tol;

pub use bounds::{
    equilateral_gap_bound, infinite_distance_sweep, min_distortion_embedding, BoundReport,
    EquilateralSpec, SweepReport, SweepRow,
};
pub use equilateral::{
    ed_evidence, equilateral_search, is_equilateral, is_equilateral_matrix, EquilateralReport,
};
pub use error::{Error, Result};
pub use gh::{gh_exact, GHResult, DEFAULT_NODE_BUDGET};
pub use imbalance::{
    c_m_profile, c_m_upper, enclosing_radius, inequality_audit, max_triple_imbalance, phi,
    r_m_upper, AuditCheck, AuditReport, CertifiedValue, CheckName, Tag,
};
pub use metric::FiniteMetricSpace;
pub use norm::{NormKind, NormedModel, PExponent, PointConfig};
pub use relation::{distortion, Correspondence, Relation};
pub use search::Budget;

/// Default RNG seed used by the command-line tools when none is given.
pub const DEFAULT_SEED: u64 = 1729;
