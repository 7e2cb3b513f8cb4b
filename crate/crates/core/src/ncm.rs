//! Noise compensation: an affine map from one device's expectation values
//! onto a reference device's, so samples from both can feed one
//! reconstruction of the reference landscape.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cs::{reconstruct, MeasurementSet, SolverConfig};
use crate::error::{Error, Result};
use crate::landscape::{sample_count, sample_indices, GridSpec, Landscape, LandscapeMeta};

/// `reference ≈ slope * source + intercept`, fitted by ordinary least squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearNcm {
    pub slope: f64,
    pub intercept: f64,
    pub training_pairs: usize,
    pub residual_rms: f64,
}

impl LinearNcm {
    pub fn identity() -> Self {
        LinearNcm {
            slope: 1.0,
            intercept: 0.0,
            training_pairs: 0,
            residual_rms: 0.0,
        }
    }

    pub fn apply(&self, v: f64) -> f64 {
        self.slope * v + self.intercept
    }
}

pub fn train(values_src: &[f64], values_ref: &[f64]) -> Result<LinearNcm> {
    if values_src.len() != values_ref.len() {
        return Err(Error::invalid(format!(
            "training needs paired values, got {} and {}",
            values_src.len(),
            values_ref.len()
        )));
    }
    let n = values_src.len();
    if n < 2 {
        return Err(Error::invalid("training needs at least two pairs"));
    }
    if values_src.iter().chain(values_ref).any(|v| !v.is_finite()) {
        return Err(Error::invalid("training values must be finite"));
    }
    let nf = n as f64;
    let mean_x = values_src.iter().sum::<f64>() / nf;
    let mean_y = values_ref.iter().sum::<f64>() / nf;
    let sxx: f64 = values_src.iter().map(|x| (x - mean_x).powi(2)).sum();
    let scale = values_src.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    if sxx <= (1e-14 * scale).powi(2) * nf {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = values_src
        .iter()
        .zip(values_ref)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual_rms = (values_src
        .iter()
        .zip(values_ref)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / nf)
        .sqrt();
    Ok(LinearNcm {
        slope,
        intercept,
        training_pairs: n,
        residual_rms,
    })
}

pub fn transform(values: &[f64], model: &LinearNcm) -> Vec<f64> {
    values.iter().map(|&v| model.apply(v)).collect()
}

/// Merges reference and (optionally compensated) secondary samples, then
/// reconstructs. Where both sets sample an index, the reference value wins.
pub fn mixed_measurements(
    ref_samples: &MeasurementSet,
    other_samples: &MeasurementSet,
    model: Option<&LinearNcm>,
) -> Result<MeasurementSet> {
    if ref_samples.grid_shape() != other_samples.grid_shape() {
        return Err(Error::invalid("sample sets are on different grids"));
    }
    let mut pairs: Vec<(usize, f64)> = ref_samples.iter().collect();
    pairs.extend(
        other_samples
            .iter()
            .map(|(i, v)| (i, model.map_or(v, |m| m.apply(v)))),
    );
    // from_pairs keeps the first occurrence of an index, which is the reference one.
    pairs.sort_by_key(|p| p.0);
    MeasurementSet::from_pairs(pairs, ref_samples.grid_shape().to_vec())
}

pub fn mixed_reconstruct(
    spec: &GridSpec,
    ref_samples: &MeasurementSet,
    other_samples: &MeasurementSet,
    model: Option<&LinearNcm>,
    config: &SolverConfig,
) -> Result<Landscape> {
    if ref_samples.grid_shape() != spec.shape().as_slice() {
        return Err(Error::invalid("samples do not match the grid"));
    }
    let merged = mixed_measurements(ref_samples, other_samples, model)?;
    if merged.is_empty() {
        return Err(Error::invalid("no samples from either source"));
    }
    let rec = reconstruct(&merged, config)?;
    Landscape::from_reconstruction(spec.clone(), &rec, merged.len(), 0.0, LandscapeMeta::default())
}

/// Which grid points each device evaluates in a mixed-source run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedSamplingPlan {
    /// Evaluated on the reference device.
    pub reference: Vec<usize>,
    /// Evaluated on the secondary device only.
    pub other: Vec<usize>,
    /// Subset of `reference` also evaluated on the secondary device, to train the model.
    pub training: Vec<usize>,
}

/// Draws `total_fraction` of the grid, gives `reference_share` of it to the
/// reference device and the rest to the secondary one, and picks
/// `training_fraction` of the grid among the reference points for training.
pub fn plan_mixed_sampling(
    n: usize,
    total_fraction: f64,
    reference_share: f64,
    training_fraction: f64,
    seed: u64,
) -> Result<MixedSamplingPlan> {
    if !(0.0..=1.0).contains(&reference_share) {
        return Err(Error::invalid(format!("reference share {reference_share} outside [0, 1]")));
    }
    let mut all = sample_indices(n, total_fraction, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_ca11);
    all.shuffle(&mut rng);
    let n_ref = (reference_share * all.len() as f64).round() as usize;
    let mut reference = all[..n_ref].to_vec();
    let mut other = all[n_ref..].to_vec();
    let n_train = if training_fraction > 0.0 {
        sample_count(n, training_fraction).min(reference.len())
    } else {
        0
    };
    let mut training: Vec<usize> = reference.choose_multiple(&mut rng, n_train).copied().collect();
    reference.sort_unstable();
    other.sort_unstable();
    training.sort_unstable();
    Ok(MixedSamplingPlan {
        reference,
        other,
        training,
    })
}
