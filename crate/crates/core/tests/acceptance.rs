//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

mod common;

use std::time::Instant;

use ghlab_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Criterion 1: on all pairs of metric spaces with <= 3 points and integer
/// distances in {1, 2, 3}, the branch-and-bound solver equals brute-force
/// enumeration over all correspondences, exactly. Runtime <= 60 s.
#[test]
fn criterion_01_exact_gh_matches_brute_force() {
    let start = Instant::now();
    let spaces = common::small_integer_spaces();
    let mut checked = 0usize;
    for x in &spaces {
        for y in &spaces {
            let fast = gh_exact(x, y, DEFAULT_NODE_BUDGET);
            assert!(fast.exact);
            let brute = common::brute_force_min_distortion(x, y);
            assert_eq!(
                2.0 * fast.distance,
                brute,
                "solver {} vs oracle {} on a {}x{} pair",
                2.0 * fast.distance,
                brute,
                x.len(),
                y.len()
            );
            let witness_dis = distortion(fast.optimal.relation(), x, y).unwrap();
            assert_eq!(witness_dis, brute);
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 1: PASS - exact solver equals brute force on {checked} pairs of \
         integer spaces ({elapsed:?})"
    );
}

/// Criterion 2: gh(one-point, Y) = diam(Y)/2 for 20 random Y within 1e-12,
/// and gh({0,1}, {0,2}) = 0.5 exactly.
#[test]
fn criterion_02_closed_form_values() {
    let point = FiniteMetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for k in 0..20 {
        let n = 1 + (k % 5);
        let y = common::random_space(&mut rng, n.max(1));
        let gh = gh_exact(&point, &y, DEFAULT_NODE_BUDGET);
        assert!(gh.exact);
        assert!(
            (gh.distance - y.diam() / 2.0).abs() <= 1e-12,
            "got {}, want {}",
            gh.distance,
            y.diam() / 2.0
        );
    }
    let x = FiniteMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let y = FiniteMetricSpace::from_matrix(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
    assert_eq!(gh_exact(&x, &y, DEFAULT_NODE_BUDGET).distance, 0.5);
    println!("criterion 2: PASS - closed-form GH values match (one-point halves the diameter)");
}

/// Criterion 3: the scaling law with relative error <= 1e-9 for
/// lambda in {0.5, 2, 10} on 20 random small pairs.
#[test]
fn criterion_03_scaling_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for k in 0..20 {
        let x = common::random_space(&mut rng, 2 + k % 3);
        let y = common::random_space(&mut rng, 2 + (k + 1) % 3);
        let base = gh_exact(&x, &y, DEFAULT_NODE_BUDGET).distance;
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = gh_exact(
                &x.scale(lambda).unwrap(),
                &y.scale(lambda).unwrap(),
                DEFAULT_NODE_BUDGET,
            )
            .distance;
            let expect = lambda * base;
            assert!(
                (scaled - expect).abs() <= 1e-9 * expect.abs().max(1e-300),
                "lambda {lambda}: {scaled} vs {expect}"
            );
        }
    }
    println!("criterion 3: PASS - GH scales linearly under metric scaling (rel err <= 1e-9)");
}

/// Criterion 4: c_3 of the line is 1.0 (within 1e-6, tag exact),
/// cross-checked against a 1e5-point grid oracle over the normalized gap
/// ratio. Runtime <= 30 s.
#[test]
fn criterion_04_line_imbalance() {
    let start = Instant::now();
    let line = NormedModel::line();
    let c = c_m_upper(&line, 3, &Budget::new(8, 500).unwrap(), DEFAULT_SEED).unwrap();
    assert!((c.value - 1.0).abs() <= 1e-6, "value = {}", c.value);
    assert_eq!(c.tag, Tag::Exact);

    // Independent oracle: three collinear points with gaps (1, t); the six
    // distance ratios give the max triple imbalance directly.
    let oracle = |t: f64| -> f64 {
        let (a, b, c) = (1.0, t, 1.0 + t);
        [
            c / a - 1.0,
            1.0 - a / c,
            (b / a - 1.0).abs(),
            (a / b - 1.0).abs(),
            c / b - 1.0,
            1.0 - b / c,
        ]
        .into_iter()
        .fold(0.0f64, f64::max)
    };
    let n = 100_000;
    let mut grid_min = f64::INFINITY;
    for i in 0..n {
        let t = 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64);
        grid_min = grid_min.min(oracle(t));
    }
    assert!(
        (grid_min - 1.0).abs() <= 1e-3,
        "grid oracle min = {grid_min}"
    );
    assert!((c.value - grid_min).abs() <= 1e-3);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!(
        "criterion 4: PASS - c_3(line) = {} (exact), grid oracle min = {grid_min} ({elapsed:?})",
        c.value
    );
}

/// Criterion 5: the line packing radius is (m-1)/2 for m = 2..8 within
/// 1e-6; the monotone divergence drives the imbalance to infinity through
/// c_m >= R_m - 2.
#[test]
fn criterion_05_line_packing() {
    let line = NormedModel::line();
    let budget = Budget::new(4, 200).unwrap();
    let mut previous = -f64::INFINITY;
    for m in 2..=8 {
        let r = r_m_upper(&line, m, &budget, DEFAULT_SEED).unwrap();
        let expect = (m as f64 - 1.0) / 2.0;
        assert!(
            (r.value - expect).abs() <= 1e-6,
            "m = {m}: {} vs {expect}",
            r.value
        );
        assert_eq!(r.tag, Tag::Exact);
        assert!(r.value > previous, "not strictly increasing at m = {m}");
        previous = r.value;
        let w = r.witness.as_ref().unwrap();
        assert!(w.min_pairwise_distance().unwrap() >= 1.0 - 1e-9);
    }
    println!("criterion 5: PASS - R_m(line) = (m-1)/2 for m = 2..8, strictly increasing");
}

/// Criterion 6: the max-norm plane. A zero-spread 4-point equilateral set is
/// found (relative spread <= 1e-9); c_4 = 0 exact; R_4 = 1/2 within 1e-6;
/// and no successful search ever exceeds the 2^dim cap.
#[test]
fn criterion_06_linf_plane_suite() {
    let linf = NormedModel::lp_inf(2).unwrap();
    let budget = Budget::new(40, 4000).unwrap();

    let eq = equilateral_search(&linf, 4, &budget, DEFAULT_SEED, tol::EQUILATERAL_TOL).unwrap();
    assert!(eq.success, "spread = {}", eq.spread);
    assert!(
        eq.spread <= 1e-9 * eq.common_distance,
        "relative spread = {}",
        eq.spread / eq.common_distance
    );

    let c = c_m_upper(&linf, 4, &budget, DEFAULT_SEED).unwrap();
    assert_eq!(c.value, 0.0);
    assert_eq!(c.tag, Tag::Exact);

    let r = r_m_upper(&linf, 4, &budget, DEFAULT_SEED).unwrap();
    assert!((r.value - 0.5).abs() <= 1e-6);
    assert_eq!(r.tag, Tag::Exact);

    // Cap 2^dim = 4: the search above the cap must fail, and the staircase
    // of successful orders never exceeds it.
    let over_cap = equilateral_search(
        &linf,
        5,
        &Budget::new(16, 2000).unwrap(),
        DEFAULT_SEED,
        tol::EQUILATERAL_TOL,
    )
    .unwrap();
    assert!(
        !over_cap.success,
        "m = 5 must stagnate, spread = {}",
        over_cap.spread
    );
    let ed = ed_evidence(&linf, &Budget::new(12, 1500).unwrap(), DEFAULT_SEED).unwrap();
    assert_eq!(ed, 4);
    println!(
        "criterion 6: PASS - max-norm plane: 4-set spread {:.3e}, c_4 = 0 exact, R_4 = 1/2, \
         cap 2^2 respected",
        eq.spread
    );
}

/// Criterion 7: the bracket audit. Conclusive passes on (line, 3) and
/// (linf^2, 4); the constructive step passes on (l2^2, 4) with margin >= 0.7.
#[test]
fn criterion_07_bracket_audit() {
    let budget = Budget::new(48, 3000).unwrap();

    let line_report = inequality_audit(&NormedModel::line(), 3, &budget, DEFAULT_SEED).unwrap();
    assert_eq!(line_report.c.value, 1.0);
    assert_eq!(line_report.r.value, 1.0);
    for check in &line_report.checks {
        assert!(
            check.pass && check.conclusive,
            "line m=3: {} not a conclusive pass",
            check.name
        );
    }

    let linf_report =
        inequality_audit(&NormedModel::lp_inf(2).unwrap(), 4, &budget, DEFAULT_SEED).unwrap();
    assert_eq!(linf_report.c.value, 0.0);
    assert_eq!(linf_report.r.value, 0.5);
    for check in &linf_report.checks {
        assert!(check.pass, "linf m=4: {} failed", check.name);
        assert!(check.conclusive);
    }

    let l2_report =
        inequality_audit(&NormedModel::lp(2, 2.0).unwrap(), 4, &budget, DEFAULT_SEED).unwrap();
    let constructive = l2_report
        .checks
        .iter()
        .find(|c| c.name == CheckName::ConstructiveStep)
        .unwrap();
    assert!(constructive.pass);
    assert!(
        constructive.margin >= 0.7,
        "constructive margin = {} (r_from_c = {})",
        constructive.margin,
        l2_report.constructive_r_from_c
    );
    println!(
        "criterion 7: PASS - audits conclusive on (line,3) and (linf^2,4); constructive margin \
         on (l2^2,4) = {:.4}",
        constructive.margin
    );
}

/// Criterion 8: the gap-bound engine. Exact value at (d=1, m=3, c=1);
/// monotone in c, linear in d, capped by d/4 (0.25 at c = 1e6 within 1e-6);
/// and the direct distortion statement holds for every correspondence
/// against <= 4-point line samples.
#[test]
fn criterion_08_gap_bound_engine() {
    let spec = EquilateralSpec::new(3, 1.0).unwrap();
    let cert = |v: f64, tag: Tag| CertifiedValue {
        value: v,
        tag,
        witness: None,
        provenance: "acceptance".into(),
    };

    let report = equilateral_gap_bound(&spec, &cert(1.0, Tag::Exact)).unwrap();
    assert_eq!(report.bound, 1.0 / 6.0);
    assert!(report.valid);

    let mut last = -1.0;
    for c in [0.0, 0.05, 0.2, 1.0, 2.0, 3.0, 10.0, 1e3, 1e6] {
        let b = equilateral_gap_bound(&spec, &cert(c, Tag::Exact))
            .unwrap()
            .bound;
        assert!(b >= last);
        assert!(b <= 0.25);
        last = b;
    }
    let capped = equilateral_gap_bound(&spec, &cert(1e6, Tag::Exact))
        .unwrap()
        .bound;
    assert!((capped - 0.25).abs() <= 1e-6);

    for d in [0.5, 2.0, 8.0] {
        let spec_d = EquilateralSpec::new(3, d).unwrap();
        let b = equilateral_gap_bound(&spec_d, &cert(1.0, Tag::Exact))
            .unwrap()
            .bound;
        assert_eq!(b, d * (1.0 / 6.0));
    }

    // Direct distortion content of the bound: every correspondence between
    // the 3-point equilateral space (d = 1) and any small line sample has
    // distortion >= min(1/2, 1/3).
    let x = FiniteMetricSpace::from_matrix(vec![
        vec![0.0, 1.0, 1.0],
        vec![1.0, 0.0, 1.0],
        vec![1.0, 1.0, 0.0],
    ])
    .unwrap();
    let floor = (0.5f64).min(1.0 / 3.0);
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let structured: [Vec<f64>; 6] = [
        vec![0.0],
        vec![0.0, 1.0 / 3.0],
        vec![0.0, 1.0, 2.0],
        vec![0.0, 1e-3, 2e-3],
        vec![-5.0, 0.0, 5.0, 10.0],
        vec![0.0, 1.0, 2.0, 3.0],
    ];
    let mut samples: Vec<FiniteMetricSpace> = structured
        .iter()
        .map(|coords| {
            let dist = coords
                .iter()
                .map(|&a| coords.iter().map(|&b| (a - b).abs()).collect())
                .collect();
            FiniteMetricSpace::from_matrix(dist).unwrap()
        })
        .collect();
    for n in 1..=4 {
        for _ in 0..5 {
            samples.push(common::random_line_space(&mut rng, n));
        }
    }
    for y in &samples {
        let min_dis = common::brute_force_min_distortion(&x, y);
        assert!(
            min_dis >= floor - 1e-9,
            "a correspondence to a {}-point line sample has distortion {min_dis} < {floor}",
            y.len()
        );
    }
    println!(
        "criterion 8: PASS - bound engine exact at 1/6, capped at d/4, and every enumerated \
         correspondence respects the distortion floor {:.4}",
        floor
    );
}

/// Criterion 9: the lambda sweep produces bounds lambda/6 within 1e-9 for
/// lambda in {1, 10, 100, 1000}, strictly increasing.
#[test]
fn criterion_09_infinite_distance_sweep() {
    let l2 = NormedModel::lp(2, 2.0).unwrap();
    let line = NormedModel::line();
    let lambdas = [1.0, 10.0, 100.0, 1000.0];
    let sweep = infinite_distance_sweep(
        &l2,
        &line,
        3,
        &lambdas,
        &Budget::new(24, 2500).unwrap(),
        DEFAULT_SEED,
    )
    .unwrap();
    assert!(sweep.equilateral.success);
    assert_eq!(sweep.c.value, 1.0);
    assert_eq!(sweep.c.tag, Tag::Exact);
    let mut previous = 0.0;
    for (row, lambda) in sweep.rows.iter().zip(lambdas) {
        assert!(row.report.valid);
        assert!(
            (row.report.bound - lambda / 6.0).abs() <= 1e-9,
            "lambda {lambda}: bound {}",
            row.report.bound
        );
        assert!(row.report.bound > previous);
        previous = row.report.bound;
    }
    println!("criterion 9: PASS - sweep bounds are lambda/6 and strictly increasing");
}

/// Criterion 10: embedding the 4-point equilateral space (d = 1) into the
/// line converges to the analytic optimum 1/2 within 1e-3 over 50 starts.
/// Runtime <= 60 s.
#[test]
fn criterion_10_embedding_converges() {
    let start = Instant::now();
    let x = FiniteMetricSpace::from_matrix(vec![
        vec![0.0, 1.0, 1.0, 1.0],
        vec![1.0, 0.0, 1.0, 1.0],
        vec![1.0, 1.0, 0.0, 1.0],
        vec![1.0, 1.0, 1.0, 0.0],
    ])
    .unwrap();
    let line = NormedModel::line();
    let budget = Budget::new(50, 3000).unwrap();
    let (config, distortion) = min_distortion_embedding(&x, &line, &budget, DEFAULT_SEED).unwrap();
    assert!(
        (distortion - 0.5).abs() <= 1e-3,
        "distortion = {distortion}, expected 0.5"
    );
    assert_eq!(config.len(), 4);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 10: PASS - 4-point equilateral set embeds into the line with distortion \
         {distortion:.6} ({elapsed:?})"
    );
}
