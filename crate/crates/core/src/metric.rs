//! Finite metric spaces given by explicit distance matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::METRIC_REL_TOL;

/// A finite metric space: labelled points plus an explicit, validated
/// distance matrix. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl TryFrom<RawSpace> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        FiniteMetricSpace::new(raw.labels, raw.dist)
    }
}

impl FiniteMetricSpace {
    /// Validates the metric axioms and builds the space.
    ///
    /// Requirements: at least one point, square matrix matching the label
    /// count, zero diagonal, positive symmetric off-diagonal entries, and the
    /// triangle inequality within relative tolerance [`METRIC_REL_TOL`].
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "a metric space needs at least one point".into(),
            ));
        }
        if dist.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: dist.len(),
            });
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::InvalidMetric(format!(
                        "dist[{i}][{j}] is not finite"
                    )));
                }
                if i == j && d != 0.0 {
                    return Err(Error::InvalidMetric(format!("dist[{i}][{i}] = {d} != 0")));
                }
                if i != j && d <= 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "dist[{i}][{j}] = {d} must be positive for distinct points"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (dist[i][j], dist[j][i]);
                if (a - b).abs() > METRIC_REL_TOL * a.max(b) {
                    return Err(Error::InvalidMetric(format!(
                        "asymmetric: dist[{i}][{j}] = {a} vs dist[{j}][{i}] = {b}"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = dist[i][k];
                    let rhs = dist[i][j] + dist[j][k];
                    if lhs > rhs * (1.0 + METRIC_REL_TOL) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails: d({i},{k}) = {lhs} > d({i},{j}) + d({j},{k}) = {rhs}"
                        )));
                    }
                }
            }
        }
        Ok(Self { labels, dist })
    }

    /// Builds a space with generated labels `p0..p{n-1}`.
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..dist.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: zero-point spaces are rejected at construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Distance between points `i` and `j`. Panics on out-of-range indices.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Largest pairwise distance (0 for a one-point space).
    pub fn diam(&self) -> f64 {
        self.dist
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &d| acc.max(d))
    }

    /// The space with every distance multiplied by `lambda > 0`.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidInput(format!(
                "scale factor must be positive, got {lambda}"
            )));
        }
        // Uniform scaling preserves all axioms, including the relative
        // triangle tolerance, so no re-validation is needed.
        let dist = self
            .dist
            .iter()
            .map(|row| row.iter().map(|&d| d * lambda).collect())
            .collect();
        Ok(Self {
            labels: self.labels.clone(),
            dist,
        })
    }

    /// Hausdorff distance between two non-empty index subsets, computed
    /// exactly from the matrix as the max of the two directed sup-inf values.
    pub fn hausdorff(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidInput(
                "Hausdorff distance needs non-empty subsets".into(),
            ));
        }
        for &i in a.iter().chain(b.iter()) {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
        }
        let directed = |from: &[usize], to: &[usize]| -> f64 {
            from.iter()
                .map(|&i| {
                    to.iter()
                        .map(|&j| self.dist[i][j])
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0f64, f64::max)
        };
        Ok(directed(a, b).max(directed(b, a)))
    }
}
