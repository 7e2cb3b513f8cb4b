use oscar::cs::{reconstruct, SolverConfig};
use oscar::landscape::{sample_indices, GridDim, GridSpec, Landscape, LandscapeMeta};
use oscar::optimize::{
    adam, nelder_mead, random_point, AdamConfig, CircuitObjective, FnObjective, InterpolatedObjective, Interpolator,
    NelderMeadConfig, Objective, QuartileSummary,
};
use oscar::sim::{random_regular_graph, Ansatz, NoiseModel};
use proptest::prelude::*;

fn spec(nx: usize, ny: usize) -> GridSpec {
    GridSpec::new(vec![
        GridDim::new("beta", -0.785, 0.785, nx),
        GridDim::new("gamma", -1.571, 1.571, ny),
    ])
    .unwrap()
}

fn tabulate(spec: &GridSpec, f: impl Fn(f64, f64) -> f64) -> Landscape {
    let values = (0..spec.len())
        .map(|i| {
            let p = spec.point(i);
            f(p[0], p[1])
        })
        .collect();
    Landscape::new(spec.clone(), values, LandscapeMeta::default()).unwrap()
}

#[test]
fn spline_accurate_at_cell_midpoints() {
    let s = spec(50, 100);
    let f = |b: f64, g: f64| (2.0 * b).sin() * g.cos();
    let interp = Interpolator::new(&tabulate(&s, f)).unwrap();
    let (xs, ys) = (s.dims()[0].values(), s.dims()[1].values());
    let mut worst = 0.0f64;
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            let (x, y) = (0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
            worst = worst.max((interp.eval(x, y) - f(x, y)).abs());
        }
    }
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn spline_reproduces_affine_functions() {
    let s = spec(7, 9);
    let f = |b: f64, g: f64| 0.3 - 1.2 * b + 0.45 * g;
    let interp = Interpolator::new(&tabulate(&s, f)).unwrap();
    for &(x, y) in &[(0.0, 0.0), (0.3, -1.2), (-0.77, 1.5), (0.123, 0.456)] {
        assert!((interp.eval(x, y) - f(x, y)).abs() < 1e-12);
    }
}

#[test]
fn full_sampling_gives_identical_adam_paths() {
    let s = spec(20, 30);
    let g = random_regular_graph(6, 3, 2).unwrap();
    let truth = oscar::sim::generate_landscape(&g, &Ansatz::Qaoa { p: 1 }, &s, &NoiseModel::ideal(), 0).unwrap();
    let meas = truth.measure(&sample_indices(s.len(), 1.0, 0).unwrap()).unwrap();
    let rec = reconstruct(&meas, &SolverConfig::default()).unwrap();
    let recon = Landscape::new(s.clone(), rec.values, LandscapeMeta::default()).unwrap();
    let a = Interpolator::new(&truth).unwrap();
    let b = Interpolator::new(&recon).unwrap();
    let cfg = AdamConfig::for_grid(&s);
    let init = [0.1, -0.4];
    let ra = adam(&mut InterpolatedObjective::maximize(&a), &init, &cfg).unwrap();
    let rb = adam(&mut InterpolatedObjective::maximize(&b), &init, &cfg).unwrap();
    assert_eq!(ra.path, rb.path);
    assert_eq!(ra.values, rb.values);
}

#[test]
fn adam_cost_per_iteration() {
    let mut obj = FnObjective(|x: &[f64]| (x[0] - 0.2).powi(2) + (x[1] + 0.1).powi(2));
    let cfg = AdamConfig {
        lr: 0.01,
        max_iters: 37,
        tol: 0.0,
        ..Default::default()
    };
    let run = adam(&mut obj, &[0.0, 0.0], &cfg).unwrap();
    assert_eq!(run.iterations, 37);
    assert_eq!(run.evaluations, 37 * 5 + 1);
    assert_eq!(run.query_count, 0);
}

#[test]
fn live_queries_cover_path() {
    let g = random_regular_graph(6, 3, 1).unwrap();
    let s = GridSpec::qaoa_p1();
    for opt in 0..2 {
        let mut live = CircuitObjective::new(&g, Ansatz::Qaoa { p: 1 }, NoiseModel::ideal(), 0).unwrap();
        let run = if opt == 0 {
            adam(&mut live, &[0.1, 0.2], &AdamConfig::for_grid(&s)).unwrap()
        } else {
            nelder_mead(&mut live, &[0.1, 0.2], &NelderMeadConfig::default()).unwrap()
        };
        assert!(run.query_count >= run.path.len());
        assert_eq!(run.query_count, live.queries());
        assert_eq!(run.query_count, run.evaluations);
    }
}

#[test]
fn optimizers_are_deterministic() {
    let g = random_regular_graph(6, 3, 3).unwrap();
    let noise = NoiseModel::depolarizing(0.003, 0.007).with_trajectories(20);
    let run = || {
        let mut live = CircuitObjective::new(&g, Ansatz::Qaoa { p: 1 }, noise, 5).unwrap();
        let cfg = AdamConfig {
            max_iters: 20,
            ..AdamConfig::for_grid(&GridSpec::qaoa_p1())
        };
        adam(&mut live, &[0.1, 0.2], &cfg).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn quartiles_match_hand_computation() {
    let q = QuartileSummary::from_values(&[7.0, 1.0, 3.0, 10.0]).unwrap();
    // Sorted 1, 3, 7, 10: q1 at h = 0.75, median at 1.5, q3 at 2.25.
    assert_eq!(q.min, 1.0);
    assert!((q.q1 - 2.5).abs() < 1e-12);
    assert!((q.median - 5.0).abs() < 1e-12);
    assert!((q.q3 - 7.75).abs() < 1e-12);
    assert_eq!(q.max, 10.0);
}

#[test]
fn random_points_cover_grid() {
    let s = GridSpec::qaoa_p1();
    let pts: Vec<Vec<f64>> = (0..200).map(|k| random_point(&s, k)).collect();
    let mean_b = pts.iter().map(|p| p[0]).sum::<f64>() / 200.0;
    assert!(mean_b.abs() < 0.1);
    assert!(pts.iter().any(|p| p[1] > 1.0) && pts.iter().any(|p| p[1] < -1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interpolation_hits_nodes_and_stays_clamped(seed in 0u64..1000, i in 0usize..8, j in 0usize..6) {
        let s = spec(8, 6);
        let l = tabulate(&s, |b, g| ((seed as f64) * 0.01 + 3.0 * b).cos() * (g * 1.3).sin());
        let interp = Interpolator::new(&l).unwrap();
        let p = s.point(s.ravel(&[i, j]));
        prop_assert!((interp.eval(p[0], p[1]) - l.at(&[i, j])).abs() < 1e-12);
        let far = interp.eval(p[0] + 10.0, p[1]);
        let edge = interp.eval(s.dims()[0].hi, p[1]);
        prop_assert!((far - edge).abs() < 1e-12);
    }

    #[test]
    fn nelder_mead_best_value_monotone(x0 in -1.0..1.0f64, y0 in -1.0..1.0f64) {
        let mut obj = FnObjective(|x: &[f64]| (3.0 * x[0]).sin() + (x[1] - 0.2).powi(2) + 0.1 * x[0] * x[0]);
        let run = nelder_mead(&mut obj, &[x0, y0], &NelderMeadConfig::default()).unwrap();
        prop_assert!(run.values.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(run.final_value() <= run.values[0]);
    }
}
