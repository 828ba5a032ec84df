//! Gromov-Hausdorff lower bounds from equilateral sets and imbalance
//! certificates, the minimal-distortion embedding search, and the lambda
//! sweep that exhibits unbounded GH lower bounds between mismatched models.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::equilateral::{equilateral_search, EquilateralReport};
use crate::error::{Error, Result};
use crate::imbalance::{c_m_upper, CertifiedValue, Tag};
use crate::metric::FiniteMetricSpace;
use crate::norm::{NormedModel, PointConfig};
use crate::search::{multistart_minimize, stream_seed, Budget};
use crate::tol::EQUILATERAL_TOL;

const EQ_SALT: u64 = 0xB0;
const C_SALT: u64 = 0xB1;

/// An equilateral set described abstractly: m >= 3 points at common
/// distance d > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilateralSpec {
    m: usize,
    d: f64,
}

impl EquilateralSpec {
    pub fn new(m: usize, d: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidInput(format!(
                "equilateral spec needs m >= 3, got {m}"
            )));
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::InvalidInput(format!(
                "diameter must be positive, got {d}"
            )));
        }
        Ok(Self { m, d })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

/// A GH lower bound with its inputs echoed. `valid` is true only when the
/// imbalance certificate's tag makes the bound sound (exact or lower); an
/// upper-tagged c still produces the number for inspection, flagged invalid.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub bound: f64,
    pub valid: bool,
    pub m: usize,
    pub d: f64,
    pub c_value: f64,
    pub c_tag: Tag,
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundReport", 6)?;
        s.serialize_field("d", &self.d)?;
        s.serialize_field("m", &self.m)?;
        s.serialize_field("c", &self.c_value)?;
        s.serialize_field("c_tag", &self.c_tag)?;
        s.serialize_field("bound", &self.bound)?;
        s.serialize_field("valid", &self.valid)?;
        s.end()
    }
}

/// Lower bound on the GH distance between any space containing an
/// equilateral m-set of diameter d and a model with imbalance certificate c:
/// half of min(d/2, d c / (2 + c)). Monotone in c, linear in d, and capped
/// by d/4.
pub fn equilateral_gap_bound(spec: &EquilateralSpec, c: &CertifiedValue) -> Result<BoundReport> {
    if !(c.value >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "imbalance certificate must be non-negative, got {}",
            c.value
        )));
    }
    let d = spec.d();
    let gap = if c.value == 0.0 {
        0.0
    } else {
        d * c.value / (2.0 + c.value)
    };
    let bound = 0.5 * (d / 2.0).min(gap);
    Ok(BoundReport {
        bound,
        valid: matches!(c.tag, Tag::Exact | Tag::Lower),
        m: spec.m(),
        d,
        c_value: c.value,
        c_tag: c.tag,
    })
}

/// Multistart minimization of the worst pairwise discrepancy between the
/// space's distances and the image distances in the model. The returned
/// value is an upper bound on the minimal achievable distortion of a map
/// into the model, and hence on twice the GH distance to the sampled image.
pub fn min_distortion_embedding(
    x: &FiniteMetricSpace,
    model: &NormedModel,
    budget: &Budget,
    seed: u64,
) -> Result<(PointConfig, f64)> {
    let n = x.len();
    let dim = model.dim();
    if n == 1 {
        let config = PointConfig::new(model.clone(), vec![vec![0.0; dim]])?;
        return Ok((config, 0.0));
    }

    // Translation invariance: pin the first point at the origin.
    let vars = (n - 1) * dim;
    let scale = x.diam();
    let zero = vec![0.0; dim];
    let objective = |coords: &[f64]| {
        let point = |i: usize| -> &[f64] {
            if i == 0 {
                &zero
            } else {
                &coords[(i - 1) * dim..i * dim]
            }
        };
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let img = model.distance_raw(point(i), point(j));
                worst = worst.max((x.distance(i, j) - img).abs());
            }
        }
        worst
    };
    let sample = |rng: &mut ChaCha8Rng| {
        (0..vars)
            .map(|_| rng.random_range(-scale..=scale))
            .collect::<Vec<f64>>()
    };
    let outcome = multistart_minimize(vars, scale, &objective, &sample, &[], budget, seed);

    let mut points = vec![vec![0.0; dim]];
    points.extend((0..n - 1).map(|i| outcome.x[i * dim..(i + 1) * dim].to_vec()));
    let config = PointConfig::new(model.clone(), points)?;
    Ok((config, outcome.value))
}

/// One row of the lambda sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub lambda: f64,
    pub report: BoundReport,
}

/// Diagnostic output of the sweep: the equilateral witness found in the
/// source model, the imbalance certificate of the target model, and one
/// bound per lambda. An empty row list with `equilateral.success == false`
/// means no equilateral m-set was found and nothing can be concluded.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub m: usize,
    pub equilateral: EquilateralReport,
    pub c: CertifiedValue,
    pub rows: Vec<SweepRow>,
}

/// Scales an equilateral witness of the source model through the given
/// lambdas and evaluates the gap bound against the target model's imbalance
/// certificate. Bounds grow linearly in lambda: with a valid positive c the
/// sweep demonstrates GH lower bounds beyond every finite threshold, which
/// is the finite rendering of an infinite GH distance.
pub fn infinite_distance_sweep(
    x_model: &NormedModel,
    y_model: &NormedModel,
    m: usize,
    lambdas: &[f64],
    budget: &Budget,
    seed: u64,
) -> Result<SweepReport> {
    if m < 3 {
        return Err(Error::InvalidInput(format!("sweep needs m >= 3, got {m}")));
    }
    if lambdas.is_empty() {
        return Err(Error::InvalidInput(
            "sweep needs at least one lambda".into(),
        ));
    }
    for &l in lambdas {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidInput(format!(
                "lambdas must be positive, got {l}"
            )));
        }
    }

    let mut equilateral = equilateral_search(
        x_model,
        m,
        budget,
        stream_seed(seed, EQ_SALT),
        EQUILATERAL_TOL,
    )?;
    if !equilateral.success {
        let c = c_m_upper(y_model, m, budget, stream_seed(seed, C_SALT))?;
        return Ok(SweepReport {
            m,
            equilateral,
            c,
            rows: Vec::new(),
        });
    }
    // Normalize the witness to common distance 1; each row then scales the
    // diameter to exactly lambda rather than re-searching.
    if equilateral.common_distance > 0.0 {
        let factor = 1.0 / equilateral.common_distance;
        equilateral.config = equilateral.config.scale(factor)?;
        equilateral.spread *= factor;
        equilateral.common_distance = 1.0;
    }

    let c = c_m_upper(y_model, m, budget, stream_seed(seed, C_SALT))?;
    let rows = lambdas
        .iter()
        .map(|&lambda| {
            let spec = EquilateralSpec::new(m, lambda)?;
            Ok(SweepRow {
                lambda,
                report: equilateral_gap_bound(&spec, &c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        m,
        equilateral,
        c,
        rows,
    })
}
