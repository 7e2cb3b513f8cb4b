use serde::{Deserialize, Serialize};

use super::Landscape;
use crate::error::{Error, Result};

/// Roughness and flatness summaries of a landscape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeMetrics {
    /// Mean squared second difference (roughness).
    pub d2: f64,
    /// Variance of first differences (flatness).
    pub vog: f64,
    /// Population variance of all values.
    pub variance: f64,
}

/// Type-7 quantile (linear interpolation between order statistics) of
/// already-sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Root-mean-square error normalized by the interquartile range of `truth`.
pub fn nrmse_values(truth: &[f64], recon: &[f64]) -> Result<f64> {
    if truth.is_empty() || truth.len() != recon.len() {
        return Err(Error::invalid(format!(
            "NRMSE needs equal nonempty inputs, got {} and {}",
            truth.len(),
            recon.len()
        )));
    }
    let mut sorted = truth.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    if iqr <= 0.0 {
        return Err(Error::ConstantTruth);
    }
    let mse = truth
        .iter()
        .zip(recon)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / truth.len() as f64;
    Ok(mse.sqrt() / iqr)
}

pub fn nrmse(truth: &Landscape, recon: &Landscape) -> Result<f64> {
    if truth.spec() != recon.spec() {
        return Err(Error::invalid("NRMSE needs landscapes on identical grids"));
    }
    nrmse_values(truth.values(), recon.values())
}

fn population_variance(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let (n, sum) = xs.clone().fold((0usize, 0.0), |(n, s), x| (n + 1, s + x));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64
}

/// Roughness and flatness metrics.
///
/// `d2` and `vog` are evaluated on every 1-D line along every axis, averaged
/// over the lines of each axis, then averaged over axes. `variance` is the
/// population variance of all values.
pub fn metrics(landscape: &Landscape) -> Result<LandscapeMetrics> {
    let shape = landscape.shape();
    if let Some(n) = shape.iter().find(|&&n| n < 3) {
        return Err(Error::invalid(format!(
            "metrics need every axis to have at least 3 points, found {n}"
        )));
    }
    let values = landscape.values();
    let total = values.len();
    let mut d2_sum = 0.0;
    let mut vog_sum = 0.0;
    let mut stride = 1;
    let mut line = Vec::new();
    for &n in &shape {
        let lines = total / n;
        let mut d2_axis = 0.0;
        let mut vog_axis = 0.0;
        for o in 0..total / (stride * n) {
            for inner in 0..stride {
                let base = inner + o * stride * n;
                line.clear();
                line.extend((0..n).map(|j| values[base + j * stride]));
                d2_axis += line
                    .windows(3)
                    .map(|w| {
                        let s = w[2] - 2.0 * w[1] + w[0];
                        s * s
                    })
                    .sum::<f64>()
                    / 4.0;
                vog_axis += population_variance(line.windows(2).map(|w| w[1] - w[0]));
            }
        }
        d2_sum += d2_axis / lines as f64;
        vog_sum += vog_axis / lines as f64;
        stride *= n;
    }
    let axes = shape.len() as f64;
    Ok(LandscapeMetrics {
        d2: d2_sum / axes,
        vog: vog_sum / axes,
        variance: population_variance(values.iter().copied()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{GridDim, GridSpec, LandscapeMeta};

    fn line(values: &[f64]) -> Landscape {
        let spec = GridSpec::new(vec![GridDim::new("x", 0.0, 1.0, values.len())]).unwrap();
        Landscape::new(spec, values.to_vec(), LandscapeMeta::default()).unwrap()
    }

    #[test]
    fn nrmse_identity_is_zero() {
        assert_eq!(nrmse_values(&[0.0, 1.0, 5.0], &[0.0, 1.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn nrmse_hand_computed() {
        let truth = [0.0, 1.0, 2.0, 3.0, 4.0];
        let recon: Vec<f64> = truth.iter().map(|v| v + 1.0).collect();
        assert!((nrmse_values(&truth, &recon).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn nrmse_constant_truth_is_an_error() {
        assert!(matches!(nrmse_values(&[2.0; 4], &[1.0; 4]), Err(Error::ConstantTruth)));
    }

    #[test]
    fn nrmse_requires_same_grid() {
        let a = line(&[0.0, 1.0, 2.0]);
        let spec = GridSpec::new(vec![GridDim::new("x", 0.0, 2.0, 3)]).unwrap();
        let b = Landscape::new(spec, vec![0.0, 1.0, 2.0], LandscapeMeta::default()).unwrap();
        assert!(nrmse(&a, &b).is_err());
    }

    #[test]
    fn quantile_type7() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&s, 0.25), 1.75);
        assert_eq!(quantile(&s, 0.75), 3.25);
    }

    #[test]
    fn constant_landscape_metrics_vanish() {
        let m = metrics(&line(&[3.0; 6])).unwrap();
        assert_eq!((m.d2, m.vog, m.variance), (0.0, 0.0, 0.0));
    }

    #[test]
    fn linear_line() {
        let m = metrics(&line(&[0.0, 1.0, 2.0, 3.0])).unwrap();
        assert_eq!(m.d2, 0.0);
        assert_eq!(m.vog, 0.0);
        assert!((m.variance - 1.25).abs() < 1e-15);
    }

    #[test]
    fn alternating_line() {
        let m = metrics(&line(&[0.0, 1.0, 0.0, 1.0])).unwrap();
        assert!((m.d2 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn short_axis_rejected() {
        assert!(metrics(&line(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn two_axes_are_averaged() {
        // f(i, j) = j^2 on a 3x3 grid: axis 0 lines are constant, axis 1 lines are [0, 1, 4].
        let spec = GridSpec::new(vec![GridDim::new("a", 0.0, 1.0, 3), GridDim::new("b", 0.0, 1.0, 3)]).unwrap();
        let values: Vec<f64> = (0..9).map(|k| ((k / 3) * (k / 3)) as f64).collect();
        let l = Landscape::new(spec, values, LandscapeMeta::default()).unwrap();
        let m = metrics(&l).unwrap();
        // second difference along axis 1: 4 - 2 + 0 = 2 -> 4/4 = 1 per line
        assert!((m.d2 - 0.5).abs() < 1e-15);
        // first differences along axis 1: [1, 3] -> variance 1
        assert!((m.vog - 0.5).abs() < 1e-15);
    }
}
