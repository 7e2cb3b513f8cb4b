use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of grid points.
pub const DEFAULT_POINT_CAP: usize = 1_000_000;

/// One axis of a rectangular parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDim {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridDim {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, count: usize) -> Self {
        GridDim {
            name: name.into(),
            lo,
            hi,
            count,
        }
    }

    /// Endpoint-inclusive linspace value at position `i`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }
}

/// A rectangular grid over circuit parameters.
///
/// Points are ordered column-major: the first dimension varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridSpec")]
pub struct GridSpec {
    dims: Vec<GridDim>,
}

#[derive(Deserialize)]
struct RawGridSpec {
    dims: Vec<GridDim>,
}

impl TryFrom<RawGridSpec> for GridSpec {
    type Error = Error;

    fn try_from(raw: RawGridSpec) -> Result<Self> {
        GridSpec::new(raw.dims)
    }
}

impl GridSpec {
    pub fn new(dims: Vec<GridDim>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_POINT_CAP)
    }

    pub fn with_cap(dims: Vec<GridDim>, cap: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::invalid("grid needs at least one dimension"));
        }
        let mut total: usize = 1;
        for d in &dims {
            if !(d.lo.is_finite() && d.hi.is_finite() && d.lo < d.hi) {
                return Err(Error::invalid(format!(
                    "dimension {:?}: need finite lo < hi, got [{}, {}]",
                    d.name, d.lo, d.hi
                )));
            }
            if d.count < 2 {
                return Err(Error::invalid(format!(
                    "dimension {:?}: need at least 2 points, got {}",
                    d.name, d.count
                )));
            }
            total = total
                .checked_mul(d.count)
                .filter(|&t| t <= cap)
                .ok_or_else(|| Error::invalid(format!("grid exceeds the {cap}-point cap")))?;
        }
        Ok(GridSpec { dims })
    }

    /// Depth-1 QAOA grid: beta in [-pi/4, pi/4] x 50, gamma in [-pi/2, pi/2] x 100.
    pub fn qaoa_p1() -> Self {
        GridSpec::new(vec![
            GridDim::new("beta", -PI / 4.0, PI / 4.0, 50),
            GridDim::new("gamma", -PI / 2.0, PI / 2.0, 100),
        ])
        .expect("preset is valid")
    }

    /// Depth-2 QAOA grid: betas in [-pi/8, pi/8] x 12, gammas in [-pi/4, pi/4] x 15.
    pub fn qaoa_p2() -> Self {
        GridSpec::new(vec![
            GridDim::new("beta1", -PI / 8.0, PI / 8.0, 12),
            GridDim::new("beta2", -PI / 8.0, PI / 8.0, 12),
            GridDim::new("gamma1", -PI / 4.0, PI / 4.0, 15),
            GridDim::new("gamma2", -PI / 4.0, PI / 4.0, 15),
        ])
        .expect("preset is valid")
    }

    /// Looks up a named preset (`paper-p1`, `paper-p2`).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "paper-p1" => Some(Self::qaoa_p1()),
            "paper-p2" => Some(Self::qaoa_p2()),
            _ => None,
        }
    }

    pub fn dims(&self) -> &[GridDim] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.dims.iter().map(|d| d.count).collect()
    }

    pub fn len(&self) -> usize {
        self.dims.iter().map(|d| d.count).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis positions of a flattened index.
    pub fn unravel(&self, mut index: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|d| {
                let i = index % d.count;
                index /= d.count;
                i
            })
            .collect()
    }

    pub fn ravel(&self, position: &[usize]) -> usize {
        let mut index = 0;
        let mut stride = 1;
        for (p, d) in position.iter().zip(&self.dims) {
            index += p * stride;
            stride *= d.count;
        }
        index
    }

    /// Parameter vector at a flattened index.
    pub fn point(&self, index: usize) -> Vec<f64> {
        self.unravel(index)
            .iter()
            .zip(&self.dims)
            .map(|(&i, d)| d.value(i))
            .collect()
    }

    /// Lower and upper corners of the grid rectangle.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.dims.iter().map(|d| (d.lo, d.hi)).collect()
    }

    /// Largest per-axis spacing.
    pub fn max_spacing(&self) -> f64 {
        self.dims.iter().map(GridDim::spacing).fold(0.0, f64::max)
    }
}

/// Every grid point in column-major order.
pub fn grid_points(spec: &GridSpec) -> Vec<Vec<f64>> {
    (0..spec.len()).map(|i| spec.point(i)).collect()
}

/// Number of samples drawn for a sampling fraction.
pub fn sample_count(n: usize, fraction: f64) -> usize {
    // Guard against 0.1 * 5000 landing a hair above an integer.
    ((fraction * n as f64) - 1e-9).ceil().max(0.0) as usize
}

/// `ceil(fraction * n)` distinct grid indices drawn uniformly without
/// replacement, returned sorted.
pub fn sample_uniform(spec: &GridSpec, fraction: f64, seed: u64) -> Result<Vec<usize>> {
    sample_indices(spec.len(), fraction, seed)
}

pub fn sample_indices(n: usize, fraction: f64, seed: u64) -> Result<Vec<usize>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid(format!("sampling fraction {fraction} outside (0, 1]")));
    }
    let m = sample_count(n, fraction);
    if m < 1 {
        return Err(Error::invalid(format!(
            "sampling fraction {fraction} selects no points out of {n}"
        )));
    }
    if m == n {
        return Ok((0..n).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, n, m).into_vec();
    idx.sort_unstable();
    Ok(idx)
}
