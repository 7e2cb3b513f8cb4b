#![allow(dead_code)]

use oscar::cs::DctPlan;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Orthonormal 1-D DCT-II matrix built straight from the cosine definition.
pub fn dct_matrix(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let scale = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
            (0..n)
                .map(|j| {
                    scale * (std::f64::consts::PI * (2 * j + 1) as f64 * k as f64 / (2.0 * n as f64)).cos()
                })
                .collect()
        })
        .collect()
}

/// Dense separable 2-D DCT of a column-major `rows x cols` grid.
pub fn dense_dct2(grid: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let a = dct_matrix(rows);
    let b = dct_matrix(cols);
    let mut out = vec![0.0; rows * cols];
    for k in 0..rows {
        for l in 0..cols {
            let mut acc = 0.0;
            for j in 0..cols {
                for i in 0..rows {
                    acc += a[k][i] * b[l][j] * grid[i + rows * j];
                }
            }
            out[k + rows * l] = acc;
        }
    }
    out
}

/// Dense inverse (transpose) of [`dense_dct2`].
pub fn dense_idct2(coeffs: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let a = dct_matrix(rows);
    let b = dct_matrix(cols);
    let mut out = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = 0.0;
            for l in 0..cols {
                for k in 0..rows {
                    acc += a[k][i] * b[l][j] * coeffs[k + rows * l];
                }
            }
            out[i + rows * j] = acc;
        }
    }
    out
}

/// Grid equal to the inverse DCT of `atoms` random ±1 coefficients.
pub fn synthetic_atoms(shape: &[usize], atoms: usize, seed: u64) -> Vec<f64> {
    let n: usize = shape.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![0.0; n];
    for i in sample(&mut rng, n, atoms) {
        coeffs[i] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    }
    DctPlan::new(shape).unwrap().inverse(&coeffs).unwrap()
}

/// RMSE over type-7 interquartile range, computed independently of the library.
pub fn nrmse(truth: &[f64], recon: &[f64]) -> f64 {
    let rmse = (truth.iter().zip(recon).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / truth.len() as f64).sqrt();
    let mut s = truth.to_vec();
    s.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = (s.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        s[lo] + (h - lo as f64) * (s[hi] - s[lo])
    };
    rmse / (q(0.75) - q(0.25))
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
