use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on caller-supplied data failed (bad scale factor,
    /// empty budget, too few points, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A vector or matrix had the wrong length for the ambient dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A distance matrix failed one of the metric axioms.
    #[error("metric axiom violated: {0}")]
    InvalidMetric(String),

    /// An index pointed outside a space's point set.
    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    /// The denominator pair of a distance ratio is (numerically) a single point.
    #[error("degenerate denominator: pair distance {distance:e} is below tolerance")]
    DegenerateDenominator { distance: f64 },

    /// Two points that must be distinct coincide within tolerance.
    #[error("duplicate points: min pairwise distance {distance:e} is below tolerance")]
    DuplicatePoints { distance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
