//! Derivative-free multistart minimization for the max-type objectives used
//! by the equilateral, imbalance, packing, and embedding searches.
//!
//! Each start runs a coordinatewise pattern search with shrinking step,
//! falling back to random directions when the axes stall and to
//! annealing-style perturbation restarts (geometrically cooled kicks) once
//! the step bottoms out. Per-start RNG streams derive from the master seed,
//! so the result is independent of scheduling, and the winner is a
//! deterministic argmin with index tie-breaking.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Multistart budget: number of random starts times pattern-search
/// iterations (coordinate sweeps) per start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    starts: usize,
    iters: usize,
}

impl Budget {
    pub fn new(starts: usize, iters: usize) -> Result<Self> {
        if starts == 0 || iters == 0 {
            return Err(Error::InvalidInput(format!(
                "budget must be positive, got {starts} starts x {iters} iterations"
            )));
        }
        Ok(Self { starts, iters })
    }

    pub fn starts(&self) -> usize {
        self.starts
    }

    pub fn iters(&self) -> usize {
        self.iters
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            starts: 40,
            iters: 4000,
        }
    }
}

pub(crate) struct SearchOutcome {
    pub x: Vec<f64>,
    pub value: f64,
}

/// SplitMix64 step; decorrelates per-start streams from the master seed.
pub(crate) fn stream_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One pattern-search run from `x0`. `scale` sets the initial step and the
/// kick radii; the step shrinks geometrically down to 1e-13 * scale.
pub(crate) fn pattern_search<F>(
    objective: &F,
    x0: Vec<f64>,
    scale: f64,
    iters: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut x = x0;
    let mut fx = objective(&x);
    let mut best_x = x.clone();
    let mut best_f = fx;
    let mut step = 0.25 * scale;
    let min_step = 1e-13 * scale;
    let mut kicks = 0u32;
    const MAX_KICKS: u32 = 12;

    for _ in 0..iters {
        let mut improved = false;
        'sweep: for d in 0..dim {
            for sgn in [1.0, -1.0] {
                let old = x[d];
                x[d] = old + sgn * step;
                let ft = objective(&x);
                if ft < fx {
                    fx = ft;
                    improved = true;
                    continue 'sweep;
                }
                x[d] = old;
            }
        }
        if !improved && dim > 1 {
            // Random directions catch descent cones the axes miss on
            // non-smooth max objectives.
            for _ in 0..4 {
                let dir = random_unit(rng, dim);
                let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
                let ft = objective(&trial);
                if ft < fx {
                    x = trial;
                    fx = ft;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            if fx < best_f {
                best_f = fx;
                best_x.clone_from(&x);
            }
            continue;
        }
        step *= 0.5;
        if step < min_step {
            kicks += 1;
            if kicks > MAX_KICKS {
                break;
            }
            let radius = scale * 0.5f64.powi(kicks as i32);
            x.clone_from(&best_x);
            for xi in &mut x {
                *xi += rng.random_range(-radius..=radius);
            }
            fx = objective(&x);
            step = radius.max(min_step * 16.0);
        }
    }
    if fx < best_f {
        best_f = fx;
        best_x = x;
    }
    (best_x, best_f)
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if norm2 > 1e-4 && norm2 <= 1.0 {
            let norm = norm2.sqrt();
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Runs `warm_starts` followed by `budget.starts()` sampled starts in
/// parallel and returns the best outcome (ties broken by start index).
pub(crate) fn multistart_minimize<F, G>(
    dim: usize,
    scale: f64,
    objective: &F,
    sample_start: &G,
    warm_starts: &[Vec<f64>],
    budget: &Budget,
    seed: u64,
) -> SearchOutcome
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    let total = warm_starts.len() + budget.starts();
    let (idx, x, value) = (0..total)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, s as u64));
            let x0 = if s < warm_starts.len() {
                warm_starts[s].clone()
            } else {
                sample_start(&mut rng)
            };
            debug_assert_eq!(x0.len(), dim);
            let (x, value) = pattern_search(objective, x0, scale, budget.iters(), &mut rng);
            (s, x, value)
        })
        .reduce(
            || (usize::MAX, Vec::new(), f64::INFINITY),
            |a, b| match a.2.total_cmp(&b.2) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => {
                    if a.0 <= b.0 {
                        a
                    } else {
                        b
                    }
                }
            },
        );
    debug_assert_ne!(idx, usize::MAX);
    SearchOutcome { x, value }
}
