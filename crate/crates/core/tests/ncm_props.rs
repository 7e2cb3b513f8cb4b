mod common;

use common::{median, nrmse, synthetic_atoms};
use oscar::cs::{reconstruct, MeasurementSet, SolverConfig};
use oscar::landscape::{GridDim, GridSpec};
use oscar::ncm::{mixed_reconstruct, plan_mixed_sampling, train, transform, LinearNcm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn spec(rows: usize, cols: usize) -> GridSpec {
    GridSpec::new(vec![GridDim::new("x", 0.0, 1.0, rows), GridDim::new("y", 0.0, 1.0, cols)]).unwrap()
}

#[test]
fn training_recovers_known_map() {
    let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
    let y: Vec<f64> = x.iter().map(|v| 1.7 * v - 0.4).collect();
    let m = train(&x, &y).unwrap();
    assert!((m.slope - 1.7).abs() < 1e-12 && (m.intercept + 0.4).abs() < 1e-12);
    assert!(m.residual_rms < 1e-12);
    assert_eq!(m.training_pairs, 50);
    assert!(train(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).is_err());
    assert!(train(&[1.0], &[1.0]).is_err());
}

#[test]
fn empty_other_share_is_plain_reconstruction() {
    let s = spec(32, 32);
    let grid = synthetic_atoms(&s.shape(), 8, 4);
    let plan = plan_mixed_sampling(s.len(), 0.2, 1.0, 0.01, 7).unwrap();
    assert!(plan.other.is_empty());
    let refs = MeasurementSet::from_grid(&grid, &s.shape(), &plan.reference).unwrap();
    let none = MeasurementSet::new(vec![], vec![], s.shape()).unwrap();
    let mixed = mixed_reconstruct(&s, &refs, &none, Some(&LinearNcm::identity()), &SolverConfig::default()).unwrap();
    let plain = reconstruct(&refs, &SolverConfig::default()).unwrap();
    assert_eq!(mixed.values(), plain.values.as_slice());
}

#[test]
fn plan_partitions_samples() {
    let plan = plan_mixed_sampling(5000, 0.1, 0.5, 0.01, 3).unwrap();
    assert_eq!(plan.reference.len() + plan.other.len(), 500);
    assert_eq!(plan.reference.len(), 250);
    assert_eq!(plan.training.len(), 50);
    assert!(plan.training.iter().all(|i| plan.reference.binary_search(i).is_ok()));
    assert!(plan.reference.iter().all(|i| plan.other.binary_search(i).is_err()));
    assert_eq!(plan, plan_mixed_sampling(5000, 0.1, 0.5, 0.01, 3).unwrap());
}

#[test]
fn compensation_helps_on_affinely_distorted_device() {
    let s = spec(64, 64);
    let mut with = Vec::new();
    let mut without = Vec::new();
    for seed in 0..8 {
        let truth = synthetic_atoms(&s.shape(), 10, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 50);
        let jitter = Normal::new(0.0, 0.002).unwrap();
        let other: Vec<f64> = truth.iter().map(|v| 0.6 * v + 0.3 + jitter.sample(&mut rng)).collect();
        let plan = plan_mixed_sampling(s.len(), 0.15, 0.5, 0.01, seed).unwrap();
        let refs = MeasurementSet::from_grid(&truth, &s.shape(), &plan.reference).unwrap();
        let oth = MeasurementSet::from_grid(&other, &s.shape(), &plan.other).unwrap();
        let tx: Vec<f64> = plan.training.iter().map(|&i| other[i]).collect();
        let ty: Vec<f64> = plan.training.iter().map(|&i| truth[i]).collect();
        let model = train(&tx, &ty).unwrap();
        let cfg = SolverConfig::default();
        let on = mixed_reconstruct(&s, &refs, &oth, Some(&model), &cfg).unwrap();
        let off = mixed_reconstruct(&s, &refs, &oth, None, &cfg).unwrap();
        with.push(nrmse(&truth, on.values()));
        without.push(nrmse(&truth, off.values()));
    }
    let (w, wo) = (median(&mut with), median(&mut without));
    assert!(w < 0.25 * wo, "with {w} without {wo}");
}

proptest! {
    #[test]
    fn training_is_affine_equivariant(
        x in prop::collection::vec(-3.0..3.0f64, 5..40),
        noise_seed in 0u64..1000,
        a in 0.2..3.0f64,
        b in -2.0..2.0f64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
        let n = Normal::new(0.0, 0.1).unwrap();
        let y: Vec<f64> = x.iter().map(|v| 0.5 * v + n.sample(&mut rng)).collect();
        let spread = x.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v)) - x.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        prop_assume!(spread > 0.1);
        let base = train(&x, &y).unwrap();
        let ya: Vec<f64> = y.iter().map(|v| a * v + b).collect();
        let mapped = train(&x, &ya).unwrap();
        prop_assert!((mapped.slope - a * base.slope).abs() < 1e-9);
        prop_assert!((mapped.intercept - (a * base.intercept + b)).abs() < 1e-9);
    }

    #[test]
    fn self_training_transforms_to_identity(x in prop::collection::vec(-10.0..10.0f64, 3..30)) {
        let spread = x.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v)) - x.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        prop_assume!(spread > 1e-3);
        let m = train(&x, &x).unwrap();
        for (a, b) in transform(&x, &m).iter().zip(&x) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
