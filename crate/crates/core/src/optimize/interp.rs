use crate::error::{Error, Result};
use crate::landscape::Landscape;

/// Derivatives at the nodes of the natural cubic spline through `(xs, ys)`.
fn natural_spline_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // Second derivatives M from the tridiagonal system with M_0 = M_{n-1} = 0.
    let mut m = vec![0.0; n];
    if n > 2 {
        let k = n - 2;
        let mut diag = vec![0.0; k];
        let mut upper = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for r in 0..k {
            let i = r + 1;
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            diag[r] = (h0 + h1) / 3.0;
            upper[r] = h1 / 6.0;
            rhs[r] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
        }
        // Thomas algorithm; the sub-diagonal entry of row r is h0/6 = upper[r-1].
        for r in 1..k {
            let w = upper[r - 1] / diag[r - 1];
            diag[r] -= w * upper[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        m[k] = rhs[k - 1] / diag[k - 1];
        for r in (0..k - 1).rev() {
            m[r + 1] = (rhs[r] - upper[r] * m[r + 2]) / diag[r];
        }
    }
    (0..n)
        .map(|i| {
            if i + 1 < n {
                let h = xs[i + 1] - xs[i];
                (ys[i + 1] - ys[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0
            } else {
                let h = xs[i] - xs[i - 1];
                (ys[i] - ys[i - 1]) / h + h * (m[i - 1] + 2.0 * m[i]) / 6.0
            }
        })
        .collect()
}

const HERMITE: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [-3.0, 3.0, -2.0, -1.0],
    [2.0, -2.0, 1.0, 1.0],
];

/// Natural bicubic spline through a 2-D landscape, stored as one bicubic
/// polynomial per grid cell. Queries outside the grid are clamped to it.
#[derive(Debug, Clone)]
pub struct Interpolator {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// `coeffs[cell][a][b]` multiplies `u^a v^b`, with `u, v` in [0, 1] across the cell.
    coeffs: Vec<[[f64; 4]; 4]>,
}

impl Interpolator {
    pub fn new(landscape: &Landscape) -> Result<Self> {
        let spec = landscape.spec();
        if spec.ndim() != 2 {
            return Err(Error::invalid(format!(
                "interpolation needs a 2-D landscape, got {} dimensions",
                spec.ndim()
            )));
        }
        let dims = spec.dims();
        let (nx, ny) = (dims[0].count, dims[1].count);
        if nx < 4 || ny < 4 {
            return Err(Error::invalid(format!("interpolation needs at least 4 points per axis, got {nx}x{ny}")));
        }
        let xs = dims[0].values();
        let ys = dims[1].values();
        let f = |i: usize, j: usize| landscape.values()[i + nx * j];

        let mut fx = vec![0.0; nx * ny];
        let mut fy = vec![0.0; nx * ny];
        let mut fxy = vec![0.0; nx * ny];
        for j in 0..ny {
            let col: Vec<f64> = (0..nx).map(|i| f(i, j)).collect();
            for (i, d) in natural_spline_slopes(&xs, &col).into_iter().enumerate() {
                fx[i + nx * j] = d;
            }
        }
        for i in 0..nx {
            let row: Vec<f64> = (0..ny).map(|j| f(i, j)).collect();
            for (j, d) in natural_spline_slopes(&ys, &row).into_iter().enumerate() {
                fy[i + nx * j] = d;
            }
            let row_dx: Vec<f64> = (0..ny).map(|j| fx[i + nx * j]).collect();
            for (j, d) in natural_spline_slopes(&ys, &row_dx).into_iter().enumerate() {
                fxy[i + nx * j] = d;
            }
        }

        let mut coeffs = Vec::with_capacity((nx - 1) * (ny - 1));
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let hx = xs[i + 1] - xs[i];
                let hy = ys[j + 1] - ys[j];
                let at = |a: &[f64], di: usize, dj: usize| a[(i + di) + nx * (j + dj)];
                let vals = landscape.values();
                let node = [
                    [at(vals, 0, 0), at(vals, 0, 1), at(&fy, 0, 0) * hy, at(&fy, 0, 1) * hy],
                    [at(vals, 1, 0), at(vals, 1, 1), at(&fy, 1, 0) * hy, at(&fy, 1, 1) * hy],
                    [at(&fx, 0, 0) * hx, at(&fx, 0, 1) * hx, at(&fxy, 0, 0) * hx * hy, at(&fxy, 0, 1) * hx * hy],
                    [at(&fx, 1, 0) * hx, at(&fx, 1, 1) * hx, at(&fxy, 1, 0) * hx * hy, at(&fxy, 1, 1) * hx * hy],
                ];
                let mut tmp = [[0.0; 4]; 4];
                for a in 0..4 {
                    for c in 0..4 {
                        tmp[a][c] = (0..4).map(|k| HERMITE[a][k] * node[k][c]).sum();
                    }
                }
                let mut cell = [[0.0; 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        cell[a][b] = (0..4).map(|k| tmp[a][k] * HERMITE[b][k]).sum();
                    }
                }
                coeffs.push(cell);
            }
        }
        Ok(Interpolator { xs, ys, coeffs })
    }

    /// Domain rectangle `[(x_lo, x_hi), (y_lo, y_hi)]`.
    pub fn bounds(&self) -> [(f64, f64); 2] {
        [
            (self.xs[0], *self.xs.last().unwrap()),
            (self.ys[0], *self.ys.last().unwrap()),
        ]
    }

    fn locate(nodes: &[f64], x: f64) -> (usize, f64) {
        let x = x.clamp(nodes[0], nodes[nodes.len() - 1]);
        let cell = match nodes.partition_point(|&n| n <= x) {
            0 => 0,
            k => (k - 1).min(nodes.len() - 2),
        };
        let t = (x - nodes[cell]) / (nodes[cell + 1] - nodes[cell]);
        (cell, t)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (i, u) = Self::locate(&self.xs, x);
        let (j, v) = Self::locate(&self.ys, y);
        let c = &self.coeffs[i + (self.xs.len() - 1) * j];
        let mut acc = 0.0;
        for a in (0..4).rev() {
            let row = ((c[a][3] * v + c[a][2]) * v + c[a][1]) * v + c[a][0];
            acc = acc * u + row;
        }
        acc
    }

    pub fn eval_point(&self, p: &[f64]) -> f64 {
        self.eval(p[0], p[1])
    }
}
