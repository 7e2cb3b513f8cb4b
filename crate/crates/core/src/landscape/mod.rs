//! Landscape grids, containers, error and roughness metrics, and file I/O.

mod grid;
mod io;
mod metrics;

use serde::{Deserialize, Serialize};

pub use grid::{
    grid_points, sample_count, sample_indices, sample_uniform, GridDim, GridSpec, DEFAULT_POINT_CAP,
};
pub use io::{export_csv, import_csv, load, read_lsc, save, write_lsc, FORMAT_VERSION, MAGIC};
pub use metrics::{metrics, nrmse, nrmse_values, quantile, LandscapeMetrics};

use crate::cs::{MeasurementSet, Reconstruction};
use crate::error::{Error, Result};
use crate::mitigation::ZneConfig;
use crate::sim::{Ansatz, NoiseModel, ProblemInstance};

/// Summary of how a reconstructed landscape was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionMeta {
    pub samples: usize,
    pub sampling_fraction: f64,
    /// Fraction of requested samples that were dropped before solving.
    #[serde(default)]
    pub omitted_fraction: f64,
    pub lambda: f64,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Provenance attached to every landscape.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LandscapeMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemInstance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<Ansatz>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mitigation: Option<ZneConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<ReconstructionMeta>,
    /// Original grid when this landscape is a 2-D reshape of a 4-D one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reshaped_from: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// Dense cost values over a [`GridSpec`], stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    spec: GridSpec,
    values: Vec<f64>,
    pub meta: LandscapeMeta,
}

impl Landscape {
    pub fn new(spec: GridSpec, values: Vec<f64>, meta: LandscapeMeta) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::invalid(format!(
                "landscape has {} values but its grid has {} points",
                values.len(),
                spec.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite landscape value at index {i}")));
        }
        Ok(Landscape { spec, values, meta })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.spec.shape()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at per-axis grid position.
    pub fn at(&self, position: &[usize]) -> f64 {
        self.values[self.spec.ravel(position)]
    }

    /// Flattened index and value of the smallest entry.
    pub fn argmin(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best })
    }

    /// Flattened index and value of the largest entry.
    pub fn argmax(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
    }

    /// Samples this landscape at `indices`.
    pub fn measure(&self, indices: &[usize]) -> Result<MeasurementSet> {
        MeasurementSet::from_grid(&self.values, &self.spec.shape(), indices)
    }

    /// Builds a landscape from a solver result over `spec`.
    pub fn from_reconstruction(
        spec: GridSpec,
        rec: &Reconstruction,
        samples: usize,
        omitted_fraction: f64,
        mut meta: LandscapeMeta,
    ) -> Result<Self> {
        meta.reconstruction = Some(ReconstructionMeta {
            samples,
            sampling_fraction: samples as f64 / spec.len() as f64,
            omitted_fraction,
            lambda: rec.lambda,
            residual_norm: rec.residual_norm,
            iterations: rec.iterations,
            converged: rec.converged,
        });
        Landscape::new(spec, rec.values.clone(), meta)
    }

    /// Maps every value through `f`, keeping grid and provenance.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Landscape::new(self.spec.clone(), self.values.iter().map(|&v| f(v)).collect(), self.meta.clone())
    }

    /// Regroups a 4-D `(a, b, c, d)` landscape as 2-D `(a*b, c*d)`.
    ///
    /// Column-major pairing means the flat value order is unchanged; only the
    /// grid description moves. The original grid is kept in the metadata so
    /// [`Landscape::reshape_from_2d`] can restore it.
    pub fn reshape_to_2d(&self) -> Result<Self> {
        let dims = self.spec.dims();
        if dims.len() != 4 {
            return Err(Error::invalid(format!(
                "reshape to 2-D needs a 4-D landscape, got {} dimensions",
                dims.len()
            )));
        }
        let rows = dims[0].count * dims[1].count;
        let cols = dims[2].count * dims[3].count;
        let spec = GridSpec::new(vec![
            GridDim::new(format!("{}x{}", dims[0].name, dims[1].name), 0.0, (rows - 1) as f64, rows),
            GridDim::new(format!("{}x{}", dims[2].name, dims[3].name), 0.0, (cols - 1) as f64, cols),
        ])?;
        let mut meta = self.meta.clone();
        meta.reshaped_from = Some(self.spec.clone());
        Landscape::new(spec, self.values.clone(), meta)
    }

    /// Inverse of [`Landscape::reshape_to_2d`].
    pub fn reshape_from_2d(&self) -> Result<Self> {
        let original = self
            .meta
            .reshaped_from
            .clone()
            .ok_or_else(|| Error::invalid("landscape was not produced by reshape_to_2d"))?;
        if original.len() != self.len() || self.spec.ndim() != 2 {
            return Err(Error::invalid("reshape metadata does not match this landscape"));
        }
        let mut meta = self.meta.clone();
        meta.reshaped_from = None;
        Landscape::new(original, self.values.clone(), meta)
    }
}
