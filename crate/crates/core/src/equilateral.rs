//! Verification and heuristic search of equilateral point sets in normed
//! models, plus lower-bound evidence for the equilateral dimension.

use rand::Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::norm::{NormedModel, PointConfig};
use crate::search::{multistart_minimize, Budget};
use crate::tol::DISTINCT_TOL;

/// Outcome of an equilateral check or search.
///
/// `success` holds iff `spread <= tol * common_distance`, where
/// `common_distance` is the largest pairwise distance and `spread` the
/// difference between the largest and smallest pairwise distances.
#[derive(Debug, Clone)]
pub struct EquilateralReport {
    pub config: PointConfig,
    pub common_distance: f64,
    pub spread: f64,
    pub success: bool,
}

impl Serialize for EquilateralReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EquilateralReport", 5)?;
        s.serialize_field("m", &self.config.len())?;
        s.serialize_field("success", &self.success)?;
        s.serialize_field("common_distance", &self.common_distance)?;
        s.serialize_field("spread", &self.spread)?;
        s.serialize_field("points", &self.config.points())?;
        s.end()
    }
}

/// Exact spread computation over all pairwise distances of a configuration
/// of at least two pairwise-distinct points.
pub fn is_equilateral(config: &PointConfig, tol: f64) -> Result<EquilateralReport> {
    if config.len() < 2 {
        return Err(Error::InvalidInput(
            "equilateral check needs at least two points".into(),
        ));
    }
    let min = config.min_pairwise_distance()?;
    if min <= DISTINCT_TOL {
        return Err(Error::DuplicatePoints { distance: min });
    }
    let max = config.max_pairwise_distance();
    let spread = max - min;
    Ok(EquilateralReport {
        config: config.clone(),
        common_distance: max,
        spread,
        success: spread <= tol * max,
    })
}

/// Spread check for an abstract finite metric space, where no coordinates
/// exist: returns (common_distance, spread, success) computed from the
/// distance matrix. Needs at least two points.
pub fn is_equilateral_matrix(space: &FiniteMetricSpace, tol: f64) -> Result<(f64, f64, bool)> {
    let n = space.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "equilateral check needs at least two points".into(),
        ));
    }
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.distance(i, j);
            min = min.min(d);
            max = max.max(d);
        }
    }
    let spread = max - min;
    Ok((max, spread, spread <= tol * max))
}

/// Multistart minimization of the relative spread (max - min)/max over
/// m-point configurations, subject to min pairwise distance >= half the max
/// (which rules out point collapse). Deterministic for a fixed seed. The
/// search is heuristic: failure is evidence, not a proof of non-existence.
pub fn equilateral_search(
    model: &NormedModel,
    m: usize,
    budget: &Budget,
    seed: u64,
    tol: f64,
) -> Result<EquilateralReport> {
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "equilateral search needs m >= 2, got {m}"
        )));
    }
    let dim = model.dim();
    let vars = m * dim;

    let objective = |x: &[f64]| spread_objective(model, x, m, dim);
    let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
        (0..vars)
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect::<Vec<f64>>()
    };
    let outcome = multistart_minimize(vars, 1.0, &objective, &sample, &[], budget, seed);

    let points: Vec<Vec<f64>> = (0..m)
        .map(|i| outcome.x[i * dim..(i + 1) * dim].to_vec())
        .collect();
    let config = PointConfig::new(model.clone(), points)?;
    report_from_config(config, tol)
}

fn report_from_config(config: PointConfig, tol: f64) -> Result<EquilateralReport> {
    match is_equilateral(&config, tol) {
        Ok(report) => Ok(report),
        Err(Error::DuplicatePoints { .. }) => {
            // A collapsed search result is a plain failure, not a caller error.
            let max = config.max_pairwise_distance();
            let min = config.min_pairwise_distance().unwrap_or(0.0);
            Ok(EquilateralReport {
                config,
                common_distance: max,
                spread: max - min,
                success: false,
            })
        }
        Err(e) => Err(e),
    }
}

fn spread_objective(model: &NormedModel, x: &[f64], m: usize, dim: usize) -> f64 {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for i in 0..m {
        for j in (i + 1)..m {
            let d = model.distance_raw(&x[i * dim..(i + 1) * dim], &x[j * dim..(j + 1) * dim]);
            min = min.min(d);
            max = max.max(d);
        }
    }
    if max <= DISTINCT_TOL {
        return 1e6;
    }
    let spread = (max - min) / max;
    // Separation floor: min pairwise >= max/2 keeps the search away from
    // partial collapse, where the relative spread is meaningless.
    let violation = (0.5 - min / max).max(0.0);
    spread + 1e3 * violation
}

/// Largest m <= 2^dim for which `equilateral_search` succeeds, increasing m
/// from 2 and stopping at the first failure. A lower bound on the
/// equilateral dimension, never an exact claim; the 2^dim cap is a hard
/// upper bound for any normed space of that dimension.
pub fn ed_evidence(model: &NormedModel, budget: &Budget, seed: u64) -> Result<usize> {
    let dim = model.dim();
    if dim >= 32 {
        return Err(Error::InvalidInput(format!(
            "dimension {dim} too large for ed evidence"
        )));
    }
    let cap = 1usize << dim;
    let mut best = 0;
    for m in 2..=cap {
        let report = equilateral_search(model, m, budget, seed, crate::tol::EQUILATERAL_TOL)?;
        if !report.success {
            break;
        }
        best = m;
    }
    // m = 2 always succeeds (any two distinct points), so best >= 2.
    debug_assert!(best >= 2);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::new(12, 1500).unwrap()
    }

    #[test]
    fn triangle_is_equilateral() {
        let l2 = NormedModel::lp(2, 2.0).unwrap();
        let h = 3.0f64.sqrt() / 2.0;
        let config =
            PointConfig::new(l2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]).unwrap();
        let report = is_equilateral(&config, 1e-9).unwrap();
        assert!(report.success);
        assert!((report.common_distance - 1.0).abs() < 1e-12);
        assert!(report.spread < 1e-12);
    }

    #[test]
    fn hypercube_in_linf_is_equilateral() {
        let linf = NormedModel::lp_inf(2).unwrap();
        let config = PointConfig::new(
            linf,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
            ],
        )
        .unwrap();
        let report = is_equilateral(&config, 1e-9).unwrap();
        assert!(report.success);
        assert_eq!(report.common_distance, 1.0);
        assert_eq!(report.spread, 0.0);
    }

    #[test]
    fn collinear_points_fail() {
        let line = NormedModel::line();
        let config = PointConfig::new(line, vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let report = is_equilateral(&config, 1e-9).unwrap();
        assert!(!report.success);
        assert_eq!(report.spread, 2.0);
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let l2 = NormedModel::lp(2, 2.0).unwrap();
        let config = PointConfig::new(l2, vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            is_equilateral(&config, 1e-9),
            Err(Error::DuplicatePoints { .. })
        ));
    }

    #[test]
    fn search_finds_four_point_set_in_linf2() {
        let linf = NormedModel::lp_inf(2).unwrap();
        let report = equilateral_search(&linf, 4, &budget(), 11, 1e-6).unwrap();
        assert!(report.success, "spread = {}", report.spread);
    }

    #[test]
    fn search_finds_cross_polytope_in_l1() {
        let l1 = NormedModel::lp(2, 1.0).unwrap();
        let report = equilateral_search(&l1, 4, &budget(), 13, 1e-6).unwrap();
        assert!(report.success, "spread = {}", report.spread);
    }

    #[test]
    fn search_finds_triangle_in_l2() {
        let l2 = NormedModel::lp(2, 2.0).unwrap();
        let report = equilateral_search(&l2, 3, &budget(), 17, 1e-6).unwrap();
        assert!(report.success, "spread = {}", report.spread);
    }

    #[test]
    fn ed_evidence_on_the_line_is_two() {
        let line = NormedModel::line();
        let ed = ed_evidence(&line, &budget(), 5).unwrap();
        assert_eq!(ed, 2);
    }

    #[test]
    fn ed_evidence_in_euclidean_plane_is_three() {
        // The triangle succeeds; the 4-point search stagnates far above
        // tolerance (the best known relative spread is ~0.29).
        let l2 = NormedModel::lp(2, 2.0).unwrap();
        let ed = ed_evidence(&l2, &budget(), 29).unwrap();
        assert_eq!(ed, 3);
    }

    #[test]
    fn matrix_level_check_works_on_abstract_spaces() {
        let eq = FiniteMetricSpace::from_matrix(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        let (common, spread, success) = is_equilateral_matrix(&eq, 1e-9).unwrap();
        assert_eq!((common, spread, success), (1.0, 0.0, true));

        let dist = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 2.0],
            vec![3.0, 2.0, 0.0],
        ];
        let skew = FiniteMetricSpace::from_matrix(dist).unwrap();
        let (_, spread, success) = is_equilateral_matrix(&skew, 1e-9).unwrap();
        assert_eq!(spread, 2.0);
        assert!(!success);
    }

    #[test]
    fn scaled_success_stays_successful() {
        let linf = NormedModel::lp_inf(2).unwrap();
        let config = PointConfig::new(
            linf,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
            ],
        )
        .unwrap();
        let scaled = config.scale(7.5).unwrap();
        let report = is_equilateral(&scaled, 1e-9).unwrap();
        assert!(report.success);
        assert_eq!(report.common_distance, 7.5);
    }
}
