//! Shared test oracles: brute-force GH by full correspondence enumeration,
//! and generators for small random metric spaces. These stay independent of
//! the library's search paths so they can check them.
#![allow(dead_code)] // each test binary uses a different subset

use ghlab_core::FiniteMetricSpace;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Minimum correspondence distortion by enumerating every subset of X x Y
/// and keeping those whose projections cover both sides. Exact and
/// implementation-independent; usable up to |X| * |Y| <= 25 or so.
pub fn brute_force_min_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let (n, m) = (x.len(), y.len());
    let bits = n * m;
    assert!(bits <= 25, "brute force limited to small products");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << bits) {
        let mut rows = 0u32;
        let mut cols = 0u32;
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                rows |= 1 << i;
                cols |= 1 << j;
            }
        }
        if rows != (1 << n) - 1 || cols != (1 << m) - 1 {
            continue;
        }
        let mut dis = 0.0f64;
        for (a, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << a) == 0 {
                continue;
            }
            for (b, &(i2, j2)) in pairs.iter().enumerate().skip(a + 1) {
                if mask & (1 << b) == 0 {
                    continue;
                }
                dis = dis.max((x.distance(i, i2) - y.distance(j, j2)).abs());
            }
        }
        best = best.min(dis);
    }
    best
}

/// The lexicographically smallest optimal correspondence, by enumerating
/// every correspondence and ordering sorted pair sequences (prefix rule).
pub fn brute_force_lex_witness(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Vec<(usize, usize)> {
    let (n, m) = (x.len(), y.len());
    let bits = n * m;
    assert!(bits <= 25);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let mut best_value = f64::INFINITY;
    let mut best_set: Option<Vec<(usize, usize)>> = None;
    for mask in 1u32..(1u32 << bits) {
        let mut rows = 0u32;
        let mut cols = 0u32;
        let mut chosen = Vec::new();
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                rows |= 1 << i;
                cols |= 1 << j;
                chosen.push((i, j));
            }
        }
        if rows != (1 << n) - 1 || cols != (1 << m) - 1 {
            continue;
        }
        let mut dis = 0.0f64;
        for (a, &(i, j)) in chosen.iter().enumerate() {
            for &(i2, j2) in &chosen[a + 1..] {
                dis = dis.max((x.distance(i, i2) - y.distance(j, j2)).abs());
            }
        }
        if dis < best_value {
            best_value = dis;
            best_set = Some(chosen);
        } else if dis == best_value {
            // Vec's ordering is lexicographic with the prefix rule, which is
            // exactly the sorted-pair-set order.
            if best_set.as_ref().is_none_or(|b| chosen < *b) {
                best_set = Some(chosen);
            }
        }
    }
    best_set.expect("non-empty spaces always admit a correspondence")
}

/// All metric spaces with at most 3 points and integer distances in
/// {1, 2, 3} satisfying the triangle inequality.
pub fn small_integer_spaces() -> Vec<FiniteMetricSpace> {
    let mut spaces = vec![FiniteMetricSpace::from_matrix(vec![vec![0.0]]).unwrap()];
    for d in 1..=3 {
        let d = d as f64;
        spaces.push(FiniteMetricSpace::from_matrix(vec![vec![0.0, d], vec![d, 0.0]]).unwrap());
    }
    for a in 1..=3i32 {
        for b in 1..=3i32 {
            for c in 1..=3i32 {
                if a > b + c || b > a + c || c > a + b {
                    continue;
                }
                let (a, b, c) = (a as f64, b as f64, c as f64);
                let dist = vec![vec![0.0, a, b], vec![a, 0.0, c], vec![b, c, 0.0]];
                spaces.push(FiniteMetricSpace::from_matrix(dist).unwrap());
            }
        }
    }
    spaces
}

/// A random metric space from n points in Euclidean 3-space; the triangle
/// inequality holds by construction.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    loop {
        let points: Vec<[f64; 3]> = (0..n)
            .map(|_| {
                [
                    rng.random_range(0.0..5.0),
                    rng.random_range(0.0..5.0),
                    rng.random_range(0.0..5.0),
                ]
            })
            .collect();
        let mut ok = true;
        'outer: for i in 0..n {
            for j in (i + 1)..n {
                let d2: f64 = (0..3).map(|k| (points[i][k] - points[j][k]).powi(2)).sum();
                if d2.sqrt() < 0.05 {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if !ok {
            continue;
        }
        let dist = points
            .iter()
            .map(|p| {
                points
                    .iter()
                    .map(|q| (0..3).map(|k| (p[k] - q[k]).powi(2)).sum::<f64>().sqrt())
                    .collect()
            })
            .collect();
        return FiniteMetricSpace::from_matrix(dist).unwrap();
    }
}

/// A random line sample of n points as a metric space.
pub fn random_line_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    loop {
        let coords: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let mut ok = true;
        for i in 0..n {
            for j in (i + 1)..n {
                if (coords[i] - coords[j]).abs() < 0.05 {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        let dist = coords
            .iter()
            .map(|&a| coords.iter().map(|&b| (a - b).abs()).collect())
            .collect();
        return FiniteMetricSpace::from_matrix(dist).unwrap();
    }
}
