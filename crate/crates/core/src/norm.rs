//! Evaluable models of finite-dimensional real normed spaces, point
//! configurations inside them, and the bridge to finite metric spaces.

use std::fmt;

use serde::de::Error as DeError;
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::tol::DISTINCT_TOL;

/// Exponent of an l^p norm; infinity is an explicit case rather than a large
/// float, which avoids overflow and precision artifacts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

/// The norm family of a model.
#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// l^p norm, p in [1, inf].
    Lp(PExponent),
    /// Polyhedral norm in support-function form: max over functionals a of
    /// |<a, x>|. The functionals must span the dual, which makes the norm
    /// definite.
    Polyhedral(Vec<Vec<f64>>),
    /// Max-of-norms product V^copies of a base model; closure of the family
    /// under the product construction when the base is a finite-p model of
    /// dimension > 1.
    Product {
        base: Box<NormedModel>,
        copies: usize,
    },
}

/// A finite-dimensional real normed space, evaluable at any vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NormedModel {
    dim: usize,
    kind: NormKind,
}

impl NormedModel {
    /// l^p model with finite p >= 1.
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidInput(format!(
                "p must satisfy p >= 1, got {p}"
            )));
        }
        Ok(Self {
            dim,
            kind: NormKind::Lp(PExponent::Finite(p)),
        })
    }

    /// l^infinity (max-coordinate) model.
    pub fn lp_inf(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(Self {
            dim,
            kind: NormKind::Lp(PExponent::Infinity),
        })
    }

    /// The real line with the absolute-value norm.
    pub fn line() -> Self {
        Self {
            dim: 1,
            kind: NormKind::Lp(PExponent::Finite(2.0)),
        }
    }

    /// Polyhedral model from dual functionals. Fails unless the functionals
    /// span the full space (otherwise the "norm" would vanish on a subspace).
    pub fn polyhedral(dim: usize, functionals: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if functionals.is_empty() {
            return Err(Error::InvalidInput(
                "polyhedral norm needs at least one functional".into(),
            ));
        }
        for f in &functionals {
            if f.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.len(),
                });
            }
            if f.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(
                    "functional entries must be finite".into(),
                ));
            }
        }
        if rank(&functionals, dim) < dim {
            return Err(Error::InvalidInput(
                "functionals do not span the space; the induced norm is not definite".into(),
            ));
        }
        Ok(Self {
            dim,
            kind: NormKind::Polyhedral(functionals),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    /// Norm of `v`; errors on a dimension mismatch.
    pub fn norm(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(self.norm_raw(v))
    }

    /// Distance induced by the norm: ||u - v||.
    pub fn distance(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.len(),
            });
        }
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(self.distance_raw(u, v))
    }

    /// The model of V^m with norm max_q ||v_q||; dim = m * dim(V).
    pub fn product_max_norm(&self, m: usize) -> Result<NormedModel> {
        if m == 0 {
            return Err(Error::InvalidInput(
                "product needs at least one copy".into(),
            ));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let dim = self.dim * m;
        let kind = match &self.kind {
            // max over copies of max-coordinate = max-coordinate on the sum.
            NormKind::Lp(PExponent::Infinity) => NormKind::Lp(PExponent::Infinity),
            // Any one-dimensional norm is |x| up to a constant; for l^p the
            // constant is 1, so the product is exactly l^infinity.
            NormKind::Lp(PExponent::Finite(_)) if self.dim == 1 => {
                NormKind::Lp(PExponent::Infinity)
            }
            // Block-lift each functional into every copy.
            NormKind::Polyhedral(functionals) => {
                let mut lifted = Vec::with_capacity(functionals.len() * m);
                for q in 0..m {
                    for f in functionals {
                        let mut row = vec![0.0; dim];
                        row[q * self.dim..(q + 1) * self.dim].copy_from_slice(f);
                        lifted.push(row);
                    }
                }
                NormKind::Polyhedral(lifted)
            }
            _ => NormKind::Product {
                base: Box::new(self.clone()),
                copies: m,
            },
        };
        Ok(NormedModel { dim, kind })
    }

    /// Norm without the dimension check; used by optimizer hot loops.
    pub(crate) fn norm_raw(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        match &self.kind {
            NormKind::Lp(PExponent::Infinity) => v.iter().fold(0.0f64, |acc, x| acc.max(x.abs())),
            NormKind::Lp(PExponent::Finite(p)) => lp_sum(v.iter().copied(), *p),
            NormKind::Polyhedral(functionals) => functionals
                .iter()
                .map(|f| f.iter().zip(v).map(|(a, x)| a * x).sum::<f64>().abs())
                .fold(0.0f64, f64::max),
            NormKind::Product { base, copies } => (0..*copies)
                .map(|q| base.norm_raw(&v[q * base.dim..(q + 1) * base.dim]))
                .fold(0.0f64, f64::max),
        }
    }

    /// ||u - v|| without materializing the difference vector.
    pub(crate) fn distance_raw(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.dim);
        debug_assert_eq!(v.len(), self.dim);
        match &self.kind {
            NormKind::Lp(PExponent::Infinity) => u
                .iter()
                .zip(v)
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs())),
            NormKind::Lp(PExponent::Finite(p)) => lp_sum(u.iter().zip(v).map(|(a, b)| a - b), *p),
            NormKind::Polyhedral(functionals) => functionals
                .iter()
                .map(|f| {
                    f.iter()
                        .zip(u.iter().zip(v))
                        .map(|(a, (x, y))| a * (x - y))
                        .sum::<f64>()
                        .abs()
                })
                .fold(0.0f64, f64::max),
            NormKind::Product { base, copies } => (0..*copies)
                .map(|q| {
                    let lo = q * base.dim;
                    let hi = lo + base.dim;
                    base.distance_raw(&u[lo..hi], &v[lo..hi])
                })
                .fold(0.0f64, f64::max),
        }
    }
}

fn lp_sum(components: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    if p == 1.0 {
        return components.map(f64::abs).sum();
    }
    if p == 2.0 {
        return components.map(|x| x * x).sum::<f64>().sqrt();
    }
    // Scale by the max coordinate so x^p cannot overflow.
    let maxabs = components.clone().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if maxabs == 0.0 {
        return 0.0;
    }
    maxabs
        * components
            .map(|x| (x.abs() / maxabs).powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
}

/// Row rank of a functional matrix via Gaussian elimination.
fn rank(rows: &[Vec<f64>], dim: usize) -> usize {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let scale = a.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let tol = scale * 1e-12;
    let mut r = 0;
    for col in 0..dim {
        let pivot = (r..a.len()).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()));
        let Some(pivot) = pivot else { break };
        if a[pivot][col].abs() <= tol {
            continue;
        }
        a.swap(r, pivot);
        for i in (r + 1)..a.len() {
            let factor = a[i][col] / a[r][col];
            for c in col..dim {
                a[i][c] -= factor * a[r][c];
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

impl fmt::Display for NormedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NormKind::Lp(PExponent::Infinity) => write!(f, "lp(p=inf, dim={})", self.dim),
            NormKind::Lp(PExponent::Finite(p)) => write!(f, "lp(p={}, dim={})", p, self.dim),
            NormKind::Polyhedral(fs) => {
                write!(f, "polyhedral(dim={}, functionals={})", self.dim, fs.len())
            }
            NormKind::Product { base, copies } => write!(f, "product({base} x {copies})"),
        }
    }
}

impl Serialize for NormedModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.kind {
            NormKind::Lp(p) => {
                let mut map = serializer.serialize_map(Some(3))?;
                map.serialize_entry("type", "lp")?;
                map.serialize_entry("dim", &self.dim)?;
                match p {
                    PExponent::Infinity => map.serialize_entry("p", "inf")?,
                    PExponent::Finite(v) => map.serialize_entry("p", v)?,
                }
                map.end()
            }
            NormKind::Polyhedral(functionals) => {
                let mut map = serializer.serialize_map(Some(3))?;
                map.serialize_entry("type", "polyhedral")?;
                map.serialize_entry("dim", &self.dim)?;
                map.serialize_entry("functionals", functionals)?;
                map.end()
            }
            NormKind::Product { base, copies } => {
                let mut map = serializer.serialize_map(Some(3))?;
                map.serialize_entry("type", "product")?;
                map.serialize_entry("base", base)?;
                map.serialize_entry("copies", copies)?;
                map.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawModel {
    Lp {
        dim: usize,
        p: RawP,
    },
    Polyhedral {
        dim: usize,
        functionals: Vec<Vec<f64>>,
    },
    Product {
        base: Box<RawModel>,
        copies: usize,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawP {
    Num(f64),
    Word(String),
}

fn build_model(raw: RawModel) -> Result<NormedModel> {
    match raw {
        RawModel::Lp {
            dim,
            p: RawP::Num(p),
        } => NormedModel::lp(dim, p),
        RawModel::Lp {
            dim,
            p: RawP::Word(w),
        } => {
            if w == "inf" {
                NormedModel::lp_inf(dim)
            } else {
                Err(Error::InvalidInput(format!(
                    "unknown p value {w:?}; use a number or \"inf\""
                )))
            }
        }
        RawModel::Polyhedral { dim, functionals } => NormedModel::polyhedral(dim, functionals),
        RawModel::Product { base, copies } => build_model(*base)?.product_max_norm(copies),
    }
}

impl<'de> Deserialize<'de> for NormedModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawModel::deserialize(deserializer)?;
        build_model(raw).map_err(D::Error::custom)
    }
}

/// An ordered list of vectors in a model; the witness object of equilateral,
/// imbalance, and packing certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    model: NormedModel,
    points: Vec<Vec<f64>>,
}

impl PointConfig {
    pub fn new(model: NormedModel, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "a point configuration needs at least one point".into(),
            ));
        }
        for p in &points {
            if p.len() != model.dim() {
                return Err(Error::DimensionMismatch {
                    expected: model.dim(),
                    got: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(
                    "point coordinates must be finite".into(),
                ));
            }
        }
        Ok(Self { model, points })
    }

    pub fn model(&self) -> &NormedModel {
        &self.model
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest pairwise distance; errors for fewer than two points.
    pub fn min_pairwise_distance(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::InvalidInput(
                "need at least two points for pairwise distances".into(),
            ));
        }
        let mut min = f64::INFINITY;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                min = min.min(self.model.distance_raw(&self.points[i], &self.points[j]));
            }
        }
        Ok(min)
    }

    /// Largest pairwise distance (0 for a single point).
    pub fn max_pairwise_distance(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                max = max.max(self.model.distance_raw(&self.points[i], &self.points[j]));
            }
        }
        max
    }

    /// Largest norm over the points.
    pub fn max_norm(&self) -> f64 {
        self.points
            .iter()
            .map(|p| self.model.norm_raw(p))
            .fold(0.0f64, f64::max)
    }

    /// Every coordinate multiplied by `lambda > 0`.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidInput(format!(
                "scale factor must be positive, got {lambda}"
            )));
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(|&c| c * lambda).collect())
            .collect();
        Ok(Self {
            model: self.model.clone(),
            points,
        })
    }

    /// The finite metric space of pairwise model distances. Points must be
    /// pairwise distinct; the result satisfies the metric axioms by
    /// construction (norm axioms plus symmetric assembly).
    pub fn sample_subspace(&self) -> Result<FiniteMetricSpace> {
        let n = self.len();
        if n > 1 {
            let min = self.min_pairwise_distance()?;
            if min <= DISTINCT_TOL {
                return Err(Error::DuplicatePoints { distance: min });
            }
        }
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.model.distance_raw(&self.points[i], &self.points[j]);
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        FiniteMetricSpace::from_matrix(dist)
    }
}
