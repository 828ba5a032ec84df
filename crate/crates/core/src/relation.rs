//! Relations and correspondences between finite metric spaces, and the
//! distortion of a relation.

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// A non-empty set of index pairs (i in X, j in Y), kept sorted and deduped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    pairs: Vec<(usize, usize)>,
}

impl Relation {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.is_empty() {
            return Err(Error::InvalidInput("a relation must be non-empty".into()));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A relation whose projections cover all of X and all of Y.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Correspondence {
    relation: Relation,
}

impl Correspondence {
    /// Validates index ranges and surjectivity of both projections.
    pub fn new(
        pairs: impl IntoIterator<Item = (usize, usize)>,
        n_x: usize,
        n_y: usize,
    ) -> Result<Self> {
        let relation = Relation::new(pairs)?;
        let mut x_hit = vec![false; n_x];
        let mut y_hit = vec![false; n_y];
        for &(i, j) in relation.pairs() {
            if i >= n_x {
                return Err(Error::IndexOutOfRange { index: i, len: n_x });
            }
            if j >= n_y {
                return Err(Error::IndexOutOfRange { index: j, len: n_y });
            }
            x_hit[i] = true;
            y_hit[j] = true;
        }
        if let Some(i) = x_hit.iter().position(|h| !h) {
            return Err(Error::InvalidInput(format!(
                "projection onto X is not surjective: point {i} is uncovered"
            )));
        }
        if let Some(j) = y_hit.iter().position(|h| !h) {
            return Err(Error::InvalidInput(format!(
                "projection onto Y is not surjective: point {j} is uncovered"
            )));
        }
        Ok(Self { relation })
    }

    /// The diagonal correspondence on a space of `n` points.
    pub fn identity(n: usize) -> Self {
        let relation = Relation::new((0..n).map(|i| (i, i))).expect("n >= 1");
        Self { relation }
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        self.relation.pairs()
    }
}

impl AsRef<Relation> for Correspondence {
    fn as_ref(&self) -> &Relation {
        &self.relation
    }
}

/// Distortion of a relation: the sup over pairs of pairs of
/// | d_X(x, x') - d_Y(y, y') |. A singleton relation has distortion 0.
pub fn distortion(rel: &Relation, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64> {
    for &(i, j) in rel.pairs() {
        if i >= x.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: x.len(),
            });
        }
        if j >= y.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: y.len(),
            });
        }
    }
    let pairs = rel.pairs();
    let mut sup = 0.0f64;
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(i2, j2) in &pairs[a + 1..] {
            let gap = (x.distance(i, i2) - y.distance(j, j2)).abs();
            sup = sup.max(gap);
        }
    }
    Ok(sup)
}
