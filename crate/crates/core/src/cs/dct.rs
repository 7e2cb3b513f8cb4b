//! Orthonormal separable DCT-II / DCT-III over column-major N-D grids.
//!
//! Each axis is transformed with Makhoul's reordering trick: a length-`n`
//! DCT-II is one complex FFT of the even/odd-interleaved input followed by
//! a quarter-sample twiddle. The inverse runs the same steps backwards.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Number of points in a grid of the given shape.
pub fn shape_len(shape: &[usize]) -> usize {
    shape.iter().product()
}

struct AxisPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `exp(-i pi k / 2n)` for k in 0..n
    twiddle: Vec<Complex64>,
    scratch_len: usize,
}

impl AxisPlan {
    fn new(len: usize, planner: &mut FftPlanner<f64>) -> Self {
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let twiddle = (0..len)
            .map(|k| Complex64::from_polar(1.0, -std::f64::consts::PI * k as f64 / (2.0 * len as f64)))
            .collect();
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        AxisPlan {
            len,
            forward,
            inverse,
            twiddle,
            scratch_len,
        }
    }

    /// Orthonormal DCT-II of `line` in place.
    fn forward_line(&self, line: &mut [f64], buf: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = self.len;
        if n == 1 {
            return;
        }
        let half = n.div_ceil(2);
        for k in 0..half {
            buf[k] = Complex64::new(line[2 * k], 0.0);
        }
        for k in 0..n / 2 {
            buf[n - 1 - k] = Complex64::new(line[2 * k + 1], 0.0);
        }
        self.forward.process_with_scratch(buf, scratch);
        let s0 = (1.0 / n as f64).sqrt();
        let sk = (2.0 / n as f64).sqrt();
        line[0] = (self.twiddle[0] * buf[0]).re * s0;
        for k in 1..n {
            line[k] = (self.twiddle[k] * buf[k]).re * sk;
        }
    }

    /// Orthonormal DCT-III (inverse of `forward_line`) in place.
    fn inverse_line(&self, line: &mut [f64], buf: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = self.len;
        if n == 1 {
            return;
        }
        let s0 = (n as f64).sqrt();
        let sk = (n as f64 / 2.0).sqrt();
        let unnorm = |k: usize| if k == 0 { line[0] * s0 } else { line[k] * sk };
        buf[0] = Complex64::new(unnorm(0), 0.0);
        for k in 1..n {
            let z = Complex64::new(unnorm(k), -unnorm(n - k));
            buf[k] = self.twiddle[k].conj() * z;
        }
        self.inverse.process_with_scratch(buf, scratch);
        let inv_n = 1.0 / n as f64;
        let half = n.div_ceil(2);
        for k in 0..half {
            line[2 * k] = buf[k].re * inv_n;
        }
        for k in 0..n / 2 {
            line[2 * k + 1] = buf[n - 1 - k].re * inv_n;
        }
    }
}

/// A reusable plan for the orthonormal separable DCT on a fixed grid shape.
///
/// Grids are flat slices in column-major order: axis 0 varies fastest.
pub struct DctPlan {
    shape: Vec<usize>,
    axes: Vec<AxisPlan>,
}

impl fmt::Debug for DctPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DctPlan").field("shape", &self.shape).finish()
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

impl DctPlan {
    pub fn new(shape: &[usize]) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::invalid("DCT shape has no dimensions"));
        }
        if shape.contains(&0) {
            return Err(Error::invalid(format!("DCT shape {shape:?} has an empty axis")));
        }
        let mut planner = FftPlanner::new();
        let axes = shape.iter().map(|&n| AxisPlan::new(n, &mut planner)).collect();
        Ok(DctPlan {
            shape: shape.to_vec(),
            axes,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        shape_len(&self.shape)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid values to DCT coefficients, in place.
    pub fn forward_inplace(&self, data: &mut [f64]) -> Result<()> {
        self.apply(data, Direction::Forward)
    }

    /// DCT coefficients to grid values, in place.
    pub fn inverse_inplace(&self, data: &mut [f64]) -> Result<()> {
        self.apply(data, Direction::Inverse)
    }

    pub fn forward(&self, grid: &[f64]) -> Result<Vec<f64>> {
        let mut out = grid.to_vec();
        self.forward_inplace(&mut out)?;
        Ok(out)
    }

    pub fn inverse(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let mut out = coeffs.to_vec();
        self.inverse_inplace(&mut out)?;
        Ok(out)
    }

    fn apply(&self, data: &mut [f64], dir: Direction) -> Result<()> {
        let total = self.len();
        if data.len() != total {
            return Err(Error::invalid(format!(
                "grid has {} values but DCT shape {:?} needs {}",
                data.len(),
                self.shape,
                total
            )));
        }
        let mut stride = 1;
        let mut line = Vec::new();
        let mut buf = Vec::new();
        let mut scratch = Vec::new();
        for axis in &self.axes {
            let n = axis.len;
            if n > 1 {
                line.resize(n, 0.0);
                buf.resize(n, Complex64::default());
                scratch.resize(axis.scratch_len, Complex64::default());
                let outer = total / (stride * n);
                for o in 0..outer {
                    for inner in 0..stride {
                        let base = inner + o * stride * n;
                        for (j, v) in line.iter_mut().enumerate() {
                            *v = data[base + j * stride];
                        }
                        match dir {
                            Direction::Forward => axis.forward_line(&mut line, &mut buf, &mut scratch),
                            Direction::Inverse => axis.inverse_line(&mut line, &mut buf, &mut scratch),
                        }
                        for (j, v) in line.iter().enumerate() {
                            data[base + j * stride] = *v;
                        }
                    }
                }
            }
            stride *= n;
        }
        Ok(())
    }
}

/// DCT-domain coefficients of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCoefficients {
    values: Vec<f64>,
    shape: Vec<usize>,
}

impl SparseCoefficients {
    pub fn new(values: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        if values.len() != shape_len(&shape) {
            return Err(Error::invalid(format!(
                "{} coefficients do not fit shape {:?}",
                values.len(),
                shape
            )));
        }
        Ok(SparseCoefficients { values, shape })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Count of coefficients with magnitude above `threshold`.
    pub fn support_size(&self, threshold: f64) -> usize {
        self.values.iter().filter(|v| v.abs() > threshold).count()
    }
}

/// Forward transform of a column-major grid with the given shape.
pub fn dct_forward(grid: &[f64], shape: &[usize]) -> Result<SparseCoefficients> {
    if grid.is_empty() {
        return Err(Error::invalid("cannot transform an empty grid"));
    }
    let plan = DctPlan::new(shape)?;
    let values = plan.forward(grid)?;
    SparseCoefficients::new(values, shape.to_vec())
}

pub fn dct_inverse(coeffs: &SparseCoefficients) -> Result<Vec<f64>> {
    let plan = DctPlan::new(coeffs.shape())?;
    plan.inverse(coeffs.values())
}
