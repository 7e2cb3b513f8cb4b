//! LASSO reconstruction of a grid from point samples, solved with FISTA.
//!
//! The sensing operator is `A = P Ψ`: inverse DCT followed by a gather at the
//! sampled indices. Because `Ψ` is orthonormal and `P` selects rows, `A` has
//! orthonormal rows and its Lipschitz constant is exactly one.

use serde::{Deserialize, Serialize};

use super::dct::{shape_len, DctPlan, SparseCoefficients};
use crate::error::{Error, Result};

/// Sampled grid points: flattened column-major indices and their values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasurementSet")]
pub struct MeasurementSet {
    indices: Vec<usize>,
    values: Vec<f64>,
    grid_shape: Vec<usize>,
}

#[derive(Deserialize)]
struct RawMeasurementSet {
    indices: Vec<usize>,
    values: Vec<f64>,
    grid_shape: Vec<usize>,
}

impl TryFrom<RawMeasurementSet> for MeasurementSet {
    type Error = Error;

    fn try_from(raw: RawMeasurementSet) -> Result<Self> {
        MeasurementSet::new(raw.indices, raw.values, raw.grid_shape)
    }
}

impl MeasurementSet {
    /// Indices must be strictly increasing and inside the grid.
    pub fn new(indices: Vec<usize>, values: Vec<f64>, grid_shape: Vec<usize>) -> Result<Self> {
        let n = shape_len(&grid_shape);
        if grid_shape.is_empty() || n == 0 {
            return Err(Error::invalid(format!("invalid grid shape {grid_shape:?}")));
        }
        if indices.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} indices but {} values",
                indices.len(),
                values.len()
            )));
        }
        if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "indices must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::invalid(format!("index {last} outside grid of {n} points")));
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite measurement {v}")));
        }
        Ok(MeasurementSet {
            indices,
            values,
            grid_shape,
        })
    }

    /// Builds a set from unordered `(index, value)` pairs. Duplicate indices
    /// keep the first occurrence.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>, grid_shape: Vec<usize>) -> Result<Self> {
        pairs.sort_by_key(|p| p.0);
        pairs.dedup_by_key(|p| p.0);
        let (indices, values) = pairs.into_iter().unzip();
        Self::new(indices, values, grid_shape)
    }

    /// Samples `grid` (full column-major values) at `indices`.
    pub fn from_grid(grid: &[f64], grid_shape: &[usize], indices: &[usize]) -> Result<Self> {
        if grid.len() != shape_len(grid_shape) {
            return Err(Error::invalid("grid length does not match its shape"));
        }
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        if let Some(&bad) = idx.iter().find(|&&i| i >= grid.len()) {
            return Err(Error::invalid(format!("index {bad} outside grid")));
        }
        let values = idx.iter().map(|&i| grid[i]).collect();
        Self::new(idx, values, grid_shape.to_vec())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid_shape(&self) -> &[usize] {
        &self.grid_shape
    }

    pub fn grid_len(&self) -> usize {
        shape_len(&self.grid_shape)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }
}

/// Parameters for [`reconstruct`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Regularization weight. `None` selects `lambda_scale * ||A^T y||_inf`.
    pub lambda: Option<f64>,
    pub lambda_scale: f64,
    pub max_iters: usize,
    /// Stop when the relative objective change falls below this.
    pub tolerance: f64,
    pub step_backtracking: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda: None,
            lambda_scale: 1e-6,
            max_iters: 5000,
            tolerance: 1e-7,
            step_backtracking: false,
        }
    }
}

impl SolverConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        SolverConfig {
            lambda: Some(lambda),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("solver tolerance must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("solver max_iters must be at least 1"));
        }
        match self.lambda {
            Some(l) if !(l >= 0.0 && l.is_finite()) => {
                Err(Error::invalid(format!("lambda must be finite and nonnegative, got {l}")))
            }
            None if !(self.lambda_scale >= 0.0 && self.lambda_scale.is_finite()) => {
                Err(Error::invalid("lambda_scale must be finite and nonnegative"))
            }
            _ => Ok(()),
        }
    }
}

/// Output of [`reconstruct`].
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// Reconstructed grid, column-major.
    pub values: Vec<f64>,
    pub coefficients: SparseCoefficients,
    /// `||A s - y||_2` at the returned coefficients.
    pub residual_norm: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Matrix-free sensing operator `A = P Ψ`.
struct SensingOperator<'a> {
    plan: DctPlan,
    indices: &'a [usize],
    grid: Vec<f64>,
}

impl<'a> SensingOperator<'a> {
    fn new(shape: &[usize], indices: &'a [usize]) -> Result<Self> {
        let plan = DctPlan::new(shape)?;
        let grid = vec![0.0; plan.len()];
        Ok(SensingOperator { plan, indices, grid })
    }

    /// `out = A s`
    fn apply(&mut self, coeffs: &[f64], out: &mut [f64]) {
        self.grid.copy_from_slice(coeffs);
        self.plan
            .inverse_inplace(&mut self.grid)
            .expect("operator buffers sized from the plan");
        for (o, &i) in out.iter_mut().zip(self.indices) {
            *o = self.grid[i];
        }
    }

    /// `out = A^T r`
    fn adjoint(&mut self, residual: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (&r, &i) in residual.iter().zip(self.indices) {
            out[i] = r;
        }
        self.plan
            .forward_inplace(out)
            .expect("operator buffers sized from the plan");
    }
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Geometric continuation: each stage divides lambda by this factor.
const CONTINUATION_FACTOR: f64 = 5.0;
/// Relative objective change that ends an intermediate continuation stage.
const STAGE_TOLERANCE: f64 = 1e-4;

/// Recovers the full grid from point samples by minimizing
/// `0.5 ||P Ψ s - y||² + λ ||s||₁` and returning `Ψ s`.
///
/// Small lambdas are reached by warm-started continuation from
/// `||A^T y||_inf / 5`. When every grid point is sampled the system is fully
/// determined and the samples are returned as-is.
pub fn reconstruct(meas: &MeasurementSet, config: &SolverConfig) -> Result<Reconstruction> {
    config.validate()?;
    if meas.is_empty() {
        return Err(Error::invalid("cannot reconstruct from an empty measurement set"));
    }
    let shape = meas.grid_shape().to_vec();
    let n = meas.grid_len();
    let m = meas.len();
    let y = meas.values();
    let mut op = SensingOperator::new(&shape, meas.indices())?;

    let mut aty = vec![0.0; n];
    op.adjoint(y, &mut aty);
    let lambda_max = aty.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let lambda = config.lambda.unwrap_or(config.lambda_scale * lambda_max);

    if m == n {
        // Identity sampling: y is the only feasible grid.
        let values = y.to_vec();
        return Ok(Reconstruction {
            coefficients: SparseCoefficients::new(aty, shape)?,
            values,
            residual_norm: 0.0,
            lambda,
            iterations: 0,
            converged: true,
        });
    }

    if lambda_max == 0.0 || lambda >= lambda_max {
        // s = 0 satisfies the optimality condition ||A^T y||_inf <= lambda.
        let residual_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        return Ok(Reconstruction {
            values: vec![0.0; n],
            coefficients: SparseCoefficients::new(vec![0.0; n], shape)?,
            residual_norm,
            lambda,
            iterations: 0,
            converged: true,
        });
    }

    let mut stages = Vec::new();
    let mut stage_lambda = lambda_max / CONTINUATION_FACTOR;
    while stage_lambda > lambda {
        stages.push(stage_lambda);
        stage_lambda /= CONTINUATION_FACTOR;
    }
    stages.push(lambda);

    let mut x = vec![0.0; n];
    let mut x_prev = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut grad = vec![0.0; n];
    let mut ax = vec![0.0; m];
    let mut ax_prev = vec![0.0; m];
    let mut az = vec![0.0; m];
    let mut resid = vec![0.0; m];
    let mut lipschitz = if config.step_backtracking { 0.25 } else { 1.0 };

    let mut iterations = 0;
    let mut converged = false;

    'stages: for (stage, &lam) in stages.iter().enumerate() {
        let last = stage + 1 == stages.len();
        let tol = if last { config.tolerance } else { config.tolerance.max(STAGE_TOLERANCE) };
        let mut t = 1.0f64;
        z.copy_from_slice(&x);
        az.copy_from_slice(&ax);
        let mut f_prev = 0.5 * sq_dist(&ax, y) + lam * l1(&x);

        loop {
            if iterations >= config.max_iters {
                break 'stages;
            }
            iterations += 1;

            for ((r, a), b) in resid.iter_mut().zip(&az).zip(y) {
                *r = a - b;
            }
            let smooth_z = 0.5 * resid.iter().map(|r| r * r).sum::<f64>();
            op.adjoint(&resid, &mut grad);

            x_prev.copy_from_slice(&x);
            ax_prev.copy_from_slice(&ax);
            loop {
                let step = 1.0 / lipschitz;
                for ((xi, zi), gi) in x.iter_mut().zip(&z).zip(&grad) {
                    *xi = soft_threshold(zi - step * gi, lam * step);
                }
                op.apply(&x, &mut ax);
                if !config.step_backtracking || lipschitz >= 1.0 {
                    break;
                }
                let smooth_x = 0.5 * sq_dist(&ax, y);
                let mut lin = 0.0;
                let mut dist = 0.0;
                for ((xi, zi), gi) in x.iter().zip(&z).zip(&grad) {
                    lin += gi * (xi - zi);
                    dist += (xi - zi) * (xi - zi);
                }
                if smooth_x <= smooth_z + lin + 0.5 * lipschitz * dist + 1e-15 * smooth_z.abs() {
                    break;
                }
                lipschitz = (lipschitz * 2.0).min(1.0);
            }

            let f = 0.5 * sq_dist(&ax, y) + lam * l1(&x);
            if f > f_prev {
                // Adaptive restart: drop momentum and step from the last iterate.
                t = 1.0;
                z.copy_from_slice(&x);
                az.copy_from_slice(&ax);
                f_prev = f;
                continue;
            }

            let rel = (f_prev - f).abs() / f_prev.max(f64::MIN_POSITIVE);
            f_prev = f;
            if rel < tol {
                if last {
                    converged = true;
                }
                break;
            }

            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let beta = (t - 1.0) / t_next;
            t = t_next;
            for ((zi, xi), pi) in z.iter_mut().zip(&x).zip(&x_prev) {
                *zi = xi + beta * (xi - pi);
            }
            for ((zi, xi), pi) in az.iter_mut().zip(&ax).zip(&ax_prev) {
                *zi = xi + beta * (xi - pi);
            }
        }
    }

    let residual_norm = sq_dist(&ax, y).sqrt();
    let coefficients = SparseCoefficients::new(x, shape)?;
    let values = op.plan.inverse(coefficients.values())?;
    Ok(Reconstruction {
        values,
        coefficients,
        residual_norm,
        lambda,
        iterations,
        converged,
    })
}

/// Fraction of DCT coefficients needed to retain `energy` of the grid's
/// squared norm, taking the largest-magnitude coefficients first.
pub fn sparsity_fraction(grid: &[f64], shape: &[usize], energy: f64) -> Result<f64> {
    if !(energy > 0.0 && energy <= 1.0) {
        return Err(Error::invalid(format!("energy fraction {energy} outside (0, 1]")));
    }
    let coeffs = super::dct::dct_forward(grid, shape)?;
    let mut power: Vec<f64> = coeffs.values().iter().map(|c| c * c).collect();
    let total: f64 = power.iter().sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    power.sort_unstable_by(|a, b| b.total_cmp(a));
    let target = energy * total;
    let mut acc = 0.0;
    let mut k = power.len();
    for (i, p) in power.iter().enumerate() {
        acc += p;
        // Relative slack absorbs rounding in the running sum at energy = 1.
        if acc >= target * (1.0 - 1e-12) {
            k = i + 1;
            break;
        }
    }
    Ok(k as f64 / power.len() as f64)
}
