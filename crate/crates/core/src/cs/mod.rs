//! Compressed-sensing core: the orthonormal DCT basis and the ℓ1 solver.

mod dct;
mod solver;

pub use dct::{dct_forward, dct_inverse, shape_len, DctPlan, SparseCoefficients};
pub use solver::{reconstruct, sparsity_fraction, MeasurementSet, Reconstruction, SolverConfig};
